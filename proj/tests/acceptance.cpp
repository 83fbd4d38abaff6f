// Acceptance harness: one pass/fail line per criterion, exit 0 iff all pass.
#include <selmer/companion.hpp>
#include <selmer/division_poly.hpp>
#include <selmer/registry.hpp>

#include <chrono>
#include <cstdio>
#include <random>
#include <set>

using namespace selmer;

#ifndef SELMER_DATA_DIR
#define SELMER_DATA_DIR "data"
#endif

static int failures = 0;

static void report(int num, bool ok, const std::string &what) {
  std::printf("criterion %d: %s — %s\n", num, ok ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// ---- 1. invariants of the 1242 pair -------------------------------------
static bool crit1() {
  const CurveQ &L = curve_by_label("1242L1"), &K = curve_by_label("1242K1");
  if (L.j != Rational(9261, 46)) return false;
  // displayed magnitude 3*987697^3 / (2^49*23); the curve data force the
  // minus sign (c4 = 3^4*987697, Delta = -2^49*3^11*23)
  Rational jK(-3 * pow_ui(Int(987697), 3), pow_ui(Int(2), 49) * 23);
  jK.canonicalize();
  if (K.j != jK) return false;
  std::vector<Int> S{Int(2), Int(23)};
  return pot_mult_primes(L) == S && pot_mult_primes(K) == S;
}

// ---- 2. conductors -------------------------------------------------------
static bool crit2() {
  const std::pair<const char *, long> want[] = {
      {"676B1", 676},  {"676E1", 676},  {"1242L1", 1242}, {"1242K1", 1242},
      {"1026N1", 1026}, {"1026O1", 1026}, {"6555D1", 6555}, {"6555E1", 6555}};
  for (auto &[label, N] : want)
    if (conductor(curve_by_label(label)) != N) return false;
  return true;
}

// ---- 3. semistability of the 6555 pair and select_m(3, 2) ----------------
static bool crit3() {
  for (const char *label : {"6555D1", "6555E1"}) {
    const CurveQ &E = curve_by_label(label);
    for (auto &[q, e] : factor(abs(E.delta)))
      if (tate_reduction(E, q).additive()) return false;
  }
  return select_m(curve_by_label("6555D1"), curve_by_label("6555E1"), Int(3),
                  2) == 9;
}

// ---- 4. A.1 route: the m = 5 family of 676B1 -----------------------------
static bool crit4() {
  FamilyData F = load_family(std::string(SELMER_DATA_DIR) + "/family_m5.json");
  if (F.m != 5) return false;
  if (F.specialize(Rational(0)).a4 != -5616) return false;
  auto roots = find_specializations(F, Rational(1168128));
  if (roots.size() != 1 || *roots.begin() != Rational(-9, 22)) return false;
  A1Result r = a1_test_member(F, curve_by_label("676E1"));
  return r.found && *r.s == Rational(-9, 22) && *r.symplectic;
}

// ---- 5. A.2 route: Proposition 4.5 at ell = 19681 ------------------------
static bool crit5() {
  const CurveQ &E1 = curve_by_label("1242L1");
  const CurveQ &E2 = curve_by_label("1242K1");
  Int p(2), ell(19681);
  unsigned long n = 3;
  if (find_split_prime(E1, E2, p, n, Int(20000), ell) != ell) return false;
  CurveFp C1 = reduce_curve(E1, ell), C2 = reduce_curve(E2, ell);
  PointFp P1 = C1.to_short_point(Int(731), Int(4673));
  PointFp P2 = C1.to_short_point(Int(3074), Int(1044));
  // (P1, P2) is a basis of the 8-torsion: 64 distinct combinations, both of
  // exact order 8
  for (const PointFp &P : {P1, P2}) {
    if (!mul(C1, Int(8), P).inf) return false;
    if (mul(C1, Int(4), P).inf) return false;
  }
  {
    std::set<std::pair<Int, Int>> seen;
    for (Int a(0); a < 8; ++a)
      for (Int b(0); b < 8; ++b) {
        PointFp R = add(C1, mul(C1, a, P1), mul(C1, b, P2));
        if (!seen.insert({R.inf ? Int(-1) : R.x, R.inf ? Int(-1) : R.y})
                 .second)
          return false;
      }
    if (seen.size() != 64) return false;
  }

  PointFp Q1 = C2.to_short_point(Int(10530), Int(9277));
  PointFp Q2 = C2.to_short_point(Int(17962), Int(16270));
  std::optional<QPoly> phi;
  for (unsigned long B = 10; B <= 160; B *= 2) {
    phi = compute_phi(E1, E2, p, n, ell, C1, P1, P2, C2, Q1, Q2, B);
    if (phi && phi_divisibility(E1, E2, p, n, *phi)) break;
    phi.reset();
  }
  if (!phi) return false;
  auto zphi = detail::qpoly_mod(*phi, ell);
  if (!zphi) return false;
  if (zpoly_eval_mod(*zphi, Int(731), ell) != 10530) return false;
  if (zpoly_eval_mod(*zphi, Int(3074), ell) != 17962) return false;

  IsoCertificate cert = certify_iso(E1, E2, p, n, *phi, ell, P1, P2, Q1, Q2);
  if (!cert.divisibility || !cert.center_square || !cert.bijective)
    return false;
  // the center square ran over all 48 exact-order-8 points
  auto pairs = detail::exact_order_pairs(C1, P1, P2, C2, Q1, Q2, p, n);
  if (2 * pairs.size() != 48) return false;

  if (!cert.twist.complete || cert.twist.witnesses.size() != 4) return false;
  const long expect_q[] = {31, 349, 233, 241};
  const long expect_tr[] = {2, 2, 2, 6};
  for (size_t i = 0; i < 4; ++i) {
    const auto &w = cert.twist.witnesses[i];
    if (w.q != expect_q[i]) return false;
    if (w.a1_mod != expect_tr[i] || w.a2_mod != expect_tr[i]) return false;
    for (size_t j = 0; j < 4; ++j)
      if (w.signs[j] != (i == j ? -1 : 1)) return false;
  }
  return true;
}

// ---- 6. full check-pair pipeline -----------------------------------------
static bool crit6() {
  CheckOptions opt;
  opt.data_dir = SELMER_DATA_DIR;
  struct Case {
    const char *c1, *c2;
    long p;
    unsigned long k;
    const char *verdict;
  };
  const Case cases[] = {{"1242L1", "1242K1", 2, 2, "proven"},
                        {"676B1", "676E1", 5, 1, "proven"},
                        {"1026N1", "1026O1", 7, 1, "proven"},
                        {"6555D1", "6555E1", 3, 2, "proven"},
                        {"676B1", "1242L1", 5, 1, "refuted"}};
  bool ok = true;
  for (const Case &c : cases) {
    auto t0 = std::chrono::steady_clock::now();
    CompanionReport rep = check_pair(curve_by_label(c.c1), curve_by_label(c.c2),
                                     Int(c.p), c.k, opt);
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    bool good = rep.verdict == c.verdict;
    std::string tail =
        good ? "" : "  [expected " + std::string(c.verdict) + "]";
    std::printf("    check-pair(%s, %s, p=%ld, k=%lu): %s (m=%s, route=%s, "
                "%.1fs)%s\n",
                c.c1, c.c2, c.p, c.k, rep.verdict.c_str(), rep.m.get_str().c_str(),
                rep.hyp_i_route.empty() ? "-" : rep.hyp_i_route.c_str(), secs,
                tail.c_str());
    std::fflush(stdout);
    if (!good) ok = false;
  }
  return ok;
}

// ---- 7. Example 7.13: iso mod 4 for (26A1, 598B1), hyp (ii) fails --------
static bool crit7() {
  CheckOptions opt;
  opt.data_dir = SELMER_DATA_DIR;
  CompanionReport rep = check_pair(curve_by_label("26A1"),
                                   curve_by_label("598B1"), Int(2), 1, opt);
  return rep.m == 4 && rep.hyp_i_status == "proven" &&
         rep.hyp_i_route == "a1" && rep.a1_symplectic && !*rep.a1_symplectic &&
         !rep.hyp_ii.equal && rep.verdict == "refuted";
}

// ---- 8. property suites ---------------------------------------------------
static bool prop_twist_trace() {
  const char *labels[] = {"1242L1", "1242K1", "676B1", "676E1", "1026N1",
                          "1026O1", "6555D1", "6555E1", "26A1", "598B1"};
  const long twists[] = {-1, 2, -3, 5, -7, 13};
  for (const char *label : labels) {
    const CurveQ &E = curve_by_label(label);
    for (long d : twists) {
      CurveQ Ed = quadratic_twist(E, Int(d));
      // the twist model has 6^12 d^6 in its discriminant, so restrict to
      // primes where it is visibly good
      for (Int q(5); q < 200; q = next_prime(q)) {
        if (mod_reduce(Int(6 * d), q) == 0) continue;
        if (mpz_divisible_p(E.delta.get_mpz_t(), q.get_mpz_t())) continue;
        if (frobenius_trace(Ed, q) !=
            kronecker_symbol(Int(d), q) * frobenius_trace(E, q))
          return false;
      }
    }
  }
  return true;
}

static bool prop_degree_formula() {
  const CurveQ &E = curve_by_label("676B1");
  const std::pair<long, unsigned long> cases[] = {
      {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}};
  for (auto &[p, n] : cases) {
    Int expected = (pow_ui(Int(p), 2 * n) - pow_ui(Int(p), 2 * n - 2)) / 2;
    if (exact_order_poly(E, Int(p), n).f.degree() != expected.get_si())
      return false;
  }
  return true;
}

static bool prop_root_sets() {
  const CurveQ &E1 = curve_by_label("1242L1");
  const CurveQ &E2 = curve_by_label("1242K1");
  ZPoly f1 = primitive_integer_poly(exact_order_poly(E1, Int(2), 3).f);
  ZPoly f2 = primitive_integer_poly(exact_order_poly(E2, Int(2), 3).f);
  int n_split = 0;
  for (Int ell(3); ell < 25000;) {
    ell = next_prime(ell);
    if (ell >= 25000) break;
    try {
      find_split_prime(E1, E2, Int(2), 3, Int(25000), ell);
    } catch (const std::exception &) {
      continue;
    }
    ++n_split;
    const std::pair<const CurveQ *, const ZPoly *> jobs[] = {{&E1, &f1},
                                                             {&E2, &f2}};
    for (auto &[E, f] : jobs) {
      CurveFp C = reduce_curve(*E, ell);
      auto [P1, P2] = torsion_basis(C, Int(2), 3);
      std::set<Int> enumerated;
      for (Int a(0); a < 8; ++a)
        for (Int b(0); b < 8; ++b) {
          if (mod_reduce(a, Int(2)) == 0 && mod_reduce(b, Int(2)) == 0)
            continue;  // not of exact order 8
          PointFp R = add(C, mul(C, a, P1), mul(C, b, P2));
          if (R.inf) return false;
          enumerated.insert(C.to_orig_x(R.x));
        }
      std::set<Int> roots;
      for (const Int &r : detail::roots_mod_prime(*f, ell)) roots.insert(r);
      if (roots != enumerated) return false;
    }
  }
  return n_split > 0;
}

static bool prop_round_trips() {
  std::mt19937_64 rng(42);
  auto rnd = [&](long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
  };
  for (int i = 0; i < 1000; ++i) {
    // rational reconstruction round trip
    Int n(rnd(-1000000, 1000000)), d(rnd(1, 1000000));
    Int g = gcd(n, d);
    if (g != 0) { n /= g; d /= g; }
    Int ell = next_prime(Int(rnd(1000, 100000)));
    unsigned long B = 1;
    Int bound(1000000), M = ell;
    while (M <= 2 * bound * bound) { M *= ell; ++B; }
    if (mod_reduce(d, ell) == 0) continue;
    Int a = mod_mul(mod_reduce(n, M), mod_inv(d, M), M);
    auto rec = rational_reconstruction(a, M, bound, bound);
    if (!rec || *rec != Rational(n, d)) return false;

    // Hensel round trip: f = (x - r) * g with a simple root at r
    Int r(rnd(-1000, 1000));
    ZPoly gpoly{Int(rnd(-50, 50)), Int(rnd(-50, 50)), Int(rnd(1, 50))};
    ZPoly f{-r * gpoly[0], gpoly[0] - r * gpoly[1], gpoly[1] - r * gpoly[2],
            gpoly[2]};
    ZPoly df = zpoly_derivative(f);
    if (zpoly_eval_mod(df, r, ell) == 0) continue;  // root not simple mod ell
    Int lifted = hensel_lift_root(f, ell, mod_reduce(r, ell), 6);
    if (lifted != mod_reduce(r, pow_ui(ell, 6))) return false;
  }
  return true;
}

static bool prop_kronecker_euler() {
  for (Int q(3); q < 200; q = next_prime(q)) {
    for (Int a(-2 * q); a < 2 * q; ++a) {
      Int k(kronecker_symbol(a, q));
      if (mod_reduce(a, q) == 0) {
        if (k != 0) return false;
        continue;
      }
      Int e = mod_pow(mod_reduce(a, q), (q - 1) / 2, q);
      if (e == q - 1) e = -1;
      if (k != e) return false;
    }
  }
  return true;
}

static bool crit8() {
  struct Suite {
    const char *name;
    bool (*run)();
  };
  const Suite suites[] = {{"twist-trace identity", prop_twist_trace},
                          {"exact-order degree formula", prop_degree_formula},
                          {"root-set equality at split primes", prop_root_sets},
                          {"reconstruction/Hensel round trips", prop_round_trips},
                          {"Kronecker vs Euler", prop_kronecker_euler}};
  bool ok = true;
  for (const Suite &s : suites) {
    bool r = s.run();
    std::printf("    %s: %s\n", s.name, r ? "pass" : "fail");
    std::fflush(stdout);
    if (!r) ok = false;
  }
  return ok;
}

int main() {
  report(1, crit1(), "j-invariants and pot-mult-primes of the 1242 pair");
  report(2, crit2(), "conductors 676 / 1242 / 1026 / 6555");
  report(3, crit3(), "6555 pair semistable, select_m(3, 2) = 9");
  report(4, crit4(), "m = 5 family: specialization -9/22 gives 676E1");
  report(5, crit5(), "Proposition 4.5 certificate at ell = 19681");
  report(6, crit6(), "check-pair verdicts for the four companion pairs "
                     "and one refuted pair");
  report(7, crit7(), "Example 7.13: mod-4 isomorphism found, hyp (ii) fails");
  report(8, crit8(), "property suites");
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all acceptance criteria passed\n");
  return failures ? 1 : 0;
}

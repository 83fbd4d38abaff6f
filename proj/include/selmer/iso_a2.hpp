#pragma once

#include <selmer/curve_fp.hpp>
#include <selmer/division_poly.hpp>
#include <selmer/hensel.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace selmer {

// One quadratic character chi_d eliminated by a good prime q: the sign
// vector of q over the whole character basis, and the traces mod p^n.
struct TwistWitness {
  Int d;                  // the character chi_d being eliminated
  Int q;                  // witness prime
  std::vector<int> signs; // kronecker(d_j, q) over the basis, in order
  Int a1_mod, a2_mod;     // a_q(E1), a_q(E2) mod p^n
};

struct TwistElimination {
  std::vector<Int> basis; // d-values of the character basis
  std::vector<TwistWitness> witnesses;
  bool complete = false;           // every basis character has a witness
  std::string failed_character;    // set when complete is false
};

// Certificate for a G_Q-isomorphism E1[p^n] ~ E2[p^n] built from the
// polynomial phi: divisibility f1 | f2 o phi over Q, commutativity of the
// x-coordinate correspondence over F_ell, bijectivity of the image basis,
// and elimination of the residual quadratic twist.
struct IsoCertificate {
  Int p;
  unsigned long n = 0;
  QPoly phi;
  Int ell;
  PointFp P1, P2; // basis of the reduction of E1, short-model coordinates
  PointFp Q1, Q2; // images on the reduction of E2
  bool divisibility = false;
  bool center_square = false;
  bool bijective = false;
  TwistElimination twist;

  bool checks_pass() const { return divisibility && center_square && bijective; }
  bool valid() const { return checks_pass() && twist.complete; }
};

namespace detail {

// all (a, b) in (Z/p^n)^2 with a*P1 + b*P2 of exact order p^n, one
// representative per {+-} class, together with the points themselves
inline std::vector<std::pair<PointFp, PointFp>>
exact_order_pairs(const CurveFp &C1, const PointFp &P1, const PointFp &P2,
                  const CurveFp &C2, const PointFp &Q1, const PointFp &Q2,
                  const Int &p, unsigned long n) {
  Int pn = pow_ui(p, n);
  std::vector<std::pair<PointFp, PointFp>> out;
  std::set<std::pair<Int, Int>> seen;
  PointFp R1 = PointFp::infinity(), T1 = PointFp::infinity();
  for (Int a(0); a < pn; ++a) {
    PointFp R = R1, T = T1;
    for (Int b(0); b < pn; ++b) {
      bool exact = (mod_reduce(a, p) != 0 || mod_reduce(b, p) != 0);
      if (exact) {
        Int na = mod_reduce(-a, pn), nb = mod_reduce(-b, pn);
        if (!seen.count({na, nb})) {
          seen.insert({a, b});
          out.push_back({R, T});
        }
      }
      R = add(C1, R, P2);
      T = add(C2, T, Q2);
    }
    R1 = add(C1, R1, P1);
    T1 = add(C2, T1, Q1);
  }
  return out;
}

// reduce a rational polynomial mod ell; nullopt when a denominator dies
inline std::optional<ZPoly> qpoly_mod(const QPoly &f, const Int &ell) {
  ZPoly out(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) {
    Int den = f.c[i].get_den();
    auto inv = mod_inv_opt(den, ell);
    if (!inv) return std::nullopt;
    out[i] = mod_mul(mod_reduce(f.c[i].get_num(), ell), *inv, ell);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

// shared state for one (E1, E2, p, n, ell) instance: the exact-order
// polynomials and caches of Hensel lifts of their roots, keyed by precision
struct PhiContext {
  Int p;
  unsigned long n;
  Int ell;
  ZPoly z1, z2; // primitive integer exact-order polynomials
  std::map<unsigned long, std::map<Int, Int>> lifts1, lifts2;

  PhiContext(const CurveQ &E1, const CurveQ &E2, const Int &p_,
             unsigned long n_, const Int &ell_)
      : p(p_), n(n_), ell(ell_),
        z1(primitive_integer_poly(exact_order_poly(E1, p_, n_).f)),
        z2(primitive_integer_poly(exact_order_poly(E2, p_, n_).f)) {}

  const Int &lift(const ZPoly &z, std::map<unsigned long, std::map<Int, Int>> &cache,
                  const Int &root, unsigned long B) {
    auto &m = cache[B];
    auto it = m.find(root);
    if (it == m.end())
      it = m.emplace(root, hensel_lift_root(z, ell, root, B)).first;
    return it->second;
  }
};

// the correspondence x(aP1+bP2) -> x(aQ1+bQ2) as original-model
// x-coordinates; nullopt when it is not a well-defined bijection of roots
inline std::optional<std::vector<std::pair<Int, Int>>>
root_correspondence(const CurveFp &C1, const PointFp &P1, const PointFp &P2,
                    const CurveFp &C2, const PointFp &Q1, const PointFp &Q2,
                    const Int &p, unsigned long n) {
  auto pairs = exact_order_pairs(C1, P1, P2, C2, Q1, Q2, p, n);
  std::map<Int, Int> corr;
  std::set<Int> images;
  for (auto &[R, T] : pairs) {
    if (R.inf || T.inf) return std::nullopt;
    Int x1 = C1.to_orig_x(R.x), x2 = C2.to_orig_x(T.x);
    auto it = corr.find(x1);
    if (it != corr.end()) {
      if (it->second != x2) return std::nullopt;
    } else {
      corr.emplace(x1, x2);
      images.insert(x2);
    }
  }
  if (corr.size() != pairs.size() || images.size() != corr.size())
    return std::nullopt;
  return std::vector<std::pair<Int, Int>>(corr.begin(), corr.end());
}

}  // namespace detail

// Smallest good prime ell <= bound with p^n | ell - 1 and the full
// p^n-torsion of both reductions rational (checked constructively by
// torsion_basis).  A caller-pinned ell is verified against the same tests.
inline Int find_split_prime(const CurveQ &E1, const CurveQ &E2, const Int &p,
                            unsigned long n, const Int &bound,
                            const std::optional<Int> &pin = std::nullopt) {
  Int pn = pow_ui(p, n);
  auto usable = [&](const Int &ell) {
    if (ell <= 3 || !is_prime(ell)) return false;
    if (mpz_divisible_p(E1.delta.get_mpz_t(), ell.get_mpz_t())) return false;
    if (mpz_divisible_p(E2.delta.get_mpz_t(), ell.get_mpz_t())) return false;
    if (mod_reduce(ell - 1, pn) != 0) return false;
    try {
      CurveFp C1 = reduce_curve(E1, ell);
      CurveFp C2 = reduce_curve(E2, ell);
      torsion_basis(C1, p, n);
      torsion_basis(C2, p, n);
    } catch (const std::exception &) {
      return false;
    }
    return true;
  };
  if (pin) {
    if (!usable(*pin))
      throw std::domain_error("find_split_prime: pinned prime fails the split test");
    return *pin;
  }
  for (Int ell(3); ell <= bound;) {
    ell = next_prime(ell);
    if (ell > bound) break;
    if (usable(ell)) return ell;
  }
  throw std::runtime_error("find_split_prime: no split prime found below bound");
}

// Interpolating polynomial of degree < d through the lifted root
// correspondence, with rationally reconstructed coefficients.  Basis
// (P1, P2) on the reduction of E1, candidate images (Q1, Q2) on E2's.
inline std::optional<QPoly>
compute_phi(detail::PhiContext &ctx, const CurveFp &C1, const PointFp &P1,
            const PointFp &P2, const CurveFp &C2, const PointFp &Q1,
            const PointFp &Q2, unsigned long B) {
  auto corr = detail::root_correspondence(C1, P1, P2, C2, Q1, Q2, ctx.p, ctx.n);
  if (!corr) return std::nullopt;
  std::vector<std::pair<Int, Int>> nodes;
  nodes.reserve(corr->size());
  for (auto &[x1, x2] : *corr)
    nodes.push_back({ctx.lift(ctx.z1, ctx.lifts1, x1, B),
                     ctx.lift(ctx.z2, ctx.lifts2, x2, B)});
  Int M = pow_ui(ctx.ell, B);
  ZPoly c = interpolate(nodes, M);
  QPoly phi;
  phi.c.resize(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    auto q = rational_reconstruction(c[i], M);
    if (!q) return std::nullopt;
    phi.c[i] = *q;
  }
  phi.normalize();
  return phi;
}

inline std::optional<QPoly>
compute_phi(const CurveQ &E1, const CurveQ &E2, const Int &p, unsigned long n,
            const Int &ell, const CurveFp &C1, const PointFp &P1,
            const PointFp &P2, const CurveFp &C2, const PointFp &Q1,
            const PointFp &Q2, unsigned long B) {
  detail::PhiContext ctx(E1, E2, p, n, ell);
  return compute_phi(ctx, C1, P1, P2, C2, Q1, Q2, B);
}

// exact divisibility f1 | f2 o phi over Q
inline bool phi_divisibility(const CurveQ &E1, const CurveQ &E2, const Int &p,
                             unsigned long n, const QPoly &phi) {
  QPoly f1 = exact_order_poly(E1, p, n).f;
  QPoly f2 = exact_order_poly(E2, p, n).f;
  return poly_divrem(compose(f2, phi), f1).second.is_zero();
}

// Character basis of the quadratic characters unramified outside
// S = {infinity, 2} U {odd primes dividing m*delta1*delta2}:
// chi_{-1}, chi_2, and chi_{r*} with r* = +-r = 1 mod 4 for each odd r.
inline std::vector<Int> character_basis(const CurveQ &E1, const CurveQ &E2,
                                        const Int &m) {
  std::vector<Int> basis{Int(-1), Int(2)};
  Int N = abs(m * E1.delta * E2.delta);
  for (auto &[r, e] : factor(N)) {
    if (r == 2) continue;
    basis.push_back(mod_reduce(r, Int(4)) == 1 ? r : -r);
  }
  return basis;
}

// Eliminate the residual quadratic twist of Lemma A.1: for each basis
// character find a good prime q with sign pattern (-1 at i, +1 elsewhere)
// and a_q(E1) = a_q(E2) != -a_q(E2) mod p^n.
inline TwistElimination eliminate_twist(const CurveQ &E1, const CurveQ &E2,
                                        const Int &p, unsigned long n,
                                        const Int &q_bound = Int(100000)) {
  Int m = pow_ui(p, n);
  TwistElimination out;
  out.basis = character_basis(E1, E2, m);
  Int bad = abs(2 * m * E1.delta * E2.delta);
  out.complete = true;
  for (size_t i = 0; i < out.basis.size(); ++i) {
    bool found = false;
    for (Int q(2); q <= q_bound && !found;) {
      q = next_prime(q);
      if (q > q_bound) break;
      if (mpz_divisible_p(bad.get_mpz_t(), q.get_mpz_t())) continue;
      std::vector<int> signs(out.basis.size());
      bool pattern = true;
      for (size_t j = 0; j < out.basis.size(); ++j) {
        signs[j] = kronecker_symbol(out.basis[j], q);
        if (signs[j] != (j == i ? -1 : 1)) { pattern = false; break; }
      }
      if (!pattern) continue;
      Int a1 = mod_reduce(frobenius_trace(E1, q), m);
      Int a2 = mod_reduce(frobenius_trace(E2, q), m);
      if (a1 != a2) continue;                       // Remark 4.1 necessary condition
      if (a1 == mod_reduce(-a2, m)) continue;       // need trace != -trace
      out.witnesses.push_back({out.basis[i], q, signs, a1, a2});
      found = true;
    }
    if (!found) {
      out.complete = false;
      out.failed_character = "chi_" + out.basis[i].get_str();
      break;
    }
  }
  return out;
}

// Assemble the certificate for a given phi, basis, and images; failed
// checks are recorded, never thrown.
inline IsoCertificate certify_iso(const CurveQ &E1, const CurveQ &E2,
                                  const Int &p, unsigned long n,
                                  const QPoly &phi, const Int &ell,
                                  const PointFp &P1, const PointFp &P2,
                                  const PointFp &Q1, const PointFp &Q2,
                                  const Int &twist_q_bound = Int(100000)) {
  IsoCertificate cert;
  cert.p = p;
  cert.n = n;
  cert.phi = phi;
  cert.ell = ell;
  cert.P1 = P1; cert.P2 = P2; cert.Q1 = Q1; cert.Q2 = Q2;

  cert.divisibility = phi_divisibility(E1, E2, p, n, phi);

  CurveFp C1 = reduce_curve(E1, ell);
  CurveFp C2 = reduce_curve(E2, ell);
  auto zphi = detail::qpoly_mod(phi, ell);
  if (zphi) {
    cert.center_square = true;
    auto pairs = detail::exact_order_pairs(C1, P1, P2, C2, Q1, Q2, p, n);
    Int expected = pow_ui(p, 2 * n) - pow_ui(p, 2 * n - 2);
    if (Int(2 * pairs.size()) != expected) cert.center_square = false;
    for (auto &[R, T] : pairs) {
      if (R.inf || T.inf ||
          zpoly_eval_mod(*zphi, C1.to_orig_x(R.x), ell) != C2.to_orig_x(T.x)) {
        cert.center_square = false;
        break;
      }
    }
  }

  // bijectivity: (Q1, Q2) spans p^{2n} pairwise distinct combinations
  {
    Int pn = pow_ui(p, n);
    std::set<PointFp> seen;
    cert.bijective = true;
    PointFp R1 = PointFp::infinity();
    for (Int a(0); a < pn && cert.bijective; ++a) {
      PointFp R = R1;
      for (Int b(0); b < pn; ++b) {
        if (!seen.insert(R).second) { cert.bijective = false; break; }
        R = add(C2, R, Q2);
      }
      R1 = add(C2, R1, Q1);
    }
  }

  if (cert.checks_pass())
    cert.twist = eliminate_twist(E1, E2, p, n, twist_q_bound);
  return cert;
}

struct PhiSearchResult {
  QPoly phi;
  PointFp Q1, Q2;
  unsigned long B = 0; // precision at which reconstruction succeeded
};

// Enumerate candidate image bases (all ordered bases of the reduction of
// E2[p^n] modulo global sign) with an escalating precision schedule, and
// return the first candidate whose phi passes the exact divisibility check.
inline std::optional<PhiSearchResult>
search_phi(const CurveQ &E1, const CurveQ &E2, const Int &p, unsigned long n,
           const Int &ell,
           const std::optional<std::pair<PointFp, PointFp>> &pinned_basis =
               std::nullopt) {
  CurveFp C1 = reduce_curve(E1, ell);
  CurveFp C2 = reduce_curve(E2, ell);
  auto [P1, P2] = pinned_basis ? *pinned_basis : torsion_basis(C1, p, n);
  auto [R1, R2] = torsion_basis(C2, p, n);

  detail::PhiContext ctx(E1, E2, p, n, ell);

  // precision schedule: ell^B > 10^40, doubling while ell^B <= 10^320
  std::vector<unsigned long> schedule;
  {
    unsigned long B = 1;
    while (pow_ui(ell, B) <= pow_ui(10UL, 40UL)) ++B;
    Int cap = pow_ui(10UL, 320UL);
    for (;; B *= 2) {
      schedule.push_back(B);
      if (pow_ui(ell, B) > cap) break;
    }
  }

  Int pn = pow_ui(p, n);
  long q = pn.get_si();
  // cache of multiples a*R1 + b*R2
  std::vector<std::vector<PointFp>> grid(q, std::vector<PointFp>(q));
  {
    PointFp A = PointFp::infinity();
    for (long a = 0; a < q; ++a) {
      PointFp R = A;
      for (long b = 0; b < q; ++b) {
        grid[a][b] = R;
        R = add(C2, R, R2);
      }
      A = add(C2, A, R1);
    }
  }
  auto unit = [&](long x) { return mod_reduce(Int(x), p) != 0; };

  for (unsigned long B : schedule) {
    // candidates: matrices [[a, b], [c, d]] in GL2(Z/p^n) acting on
    // (R1, R2); keep one of {M, -M} via a lexicographic rule
    for (long a = 0; a < q; ++a)
      for (long c = 0; c < q; ++c) {
        if (!unit(a) && !unit(c)) continue;
        for (long b = 0; b < q; ++b)
          for (long d = 0; d < q; ++d) {
            if (!unit(a * d - c * b)) continue;
            long na = (q - a) % q, nb = (q - b) % q, nc = (q - c) % q,
                 nd = (q - d) % q;
            if (std::tuple(a, b, c, d) > std::tuple(na, nb, nc, nd)) continue;
            PointFp Q1 = grid[a][c], Q2 = grid[b][d];
            auto phi = compute_phi(ctx, C1, P1, P2, C2, Q1, Q2, B);
            if (!phi) continue;
            if (!phi_divisibility(E1, E2, p, n, *phi)) continue;
            return PhiSearchResult{*phi, Q1, Q2, B};
          }
      }
  }
  return std::nullopt;
}

// ---- JSON serialization -------------------------------------------------

inline std::string rational_str(const Rational &r) { return r.get_str(); }

inline nlohmann::json point_json(const CurveFp &C, const PointFp &P) {
  if (P.inf) return {{"inf", true}};
  PointFp O = C.to_orig_point(P);
  return {{"x", O.x.get_str()}, {"y", O.y.get_str()}};
}

inline nlohmann::json to_json(const IsoCertificate &cert, const CurveQ &E1,
                              const CurveQ &E2) {
  CurveFp C1 = reduce_curve(E1, cert.ell);
  CurveFp C2 = reduce_curve(E2, cert.ell);
  nlohmann::json phi = nlohmann::json::array();
  for (const auto &c : cert.phi.c) phi.push_back(rational_str(c));
  nlohmann::json tw;
  tw["complete"] = cert.twist.complete;
  if (!cert.twist.complete) tw["failed_character"] = cert.twist.failed_character;
  tw["basis"] = nlohmann::json::array();
  for (const auto &d : cert.twist.basis) tw["basis"].push_back(d.get_str());
  tw["witnesses"] = nlohmann::json::array();
  for (const auto &w : cert.twist.witnesses)
    tw["witnesses"].push_back({{"character", "chi_" + w.d.get_str()},
                               {"q", w.q.get_str()},
                               {"signs", w.signs},
                               {"a_q_E1_mod_m", w.a1_mod.get_str()},
                               {"a_q_E2_mod_m", w.a2_mod.get_str()}});
  return {{"m", pow_ui(cert.p, cert.n).get_str()},
          {"ell", cert.ell.get_str()},
          {"phi_coeffs", phi},
          {"basis", {point_json(C1, cert.P1), point_json(C1, cert.P2)}},
          {"images", {point_json(C2, cert.Q1), point_json(C2, cert.Q2)}},
          {"checks",
           {{"divisibility", cert.divisibility},
            {"center_square", cert.center_square},
            {"bijective", cert.bijective}}},
          {"twist_elimination", tw},
          {"valid", cert.valid()}};
}

}  // namespace selmer

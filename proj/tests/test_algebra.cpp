#include <catch2/catch_amalgamated.hpp>

#include <selmer/hensel.hpp>
#include <selmer/integers.hpp>
#include <selmer/polynomial.hpp>

#include <random>

using namespace selmer;

static Rational Q(long n, long d = 1) { return Rational(n, d); }

TEST_CASE("poly_divrem basics") {
  QPoly f{Q(-1), Q(0), Q(1)};  // x^2 - 1
  QPoly g{Q(-1), Q(1)};        // x - 1
  auto [q, r] = poly_divrem(f, g);
  CHECK(q == QPoly{Q(1), Q(1)});
  CHECK(r.is_zero());

  QPoly f2{Q(1), Q(0), Q(1)};  // x^2 + 1
  QPoly g2{Q(0), Q(1)};        // x
  auto [q2, r2] = poly_divrem(f2, g2);
  CHECK(q2 == QPoly{Q(0), Q(1)});
  CHECK(r2 == QPoly{Q(1)});

  CHECK_THROWS(poly_divrem(f, QPoly::zero()));
}

TEST_CASE("poly_divrem identity on random inputs") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    auto rnd_poly = [&](int maxdeg) {
      QPoly p;
      int d = int(rng() % (maxdeg + 1));
      for (int i = 0; i <= d; ++i)
        p.c.push_back(Q(long(rng() % 41) - 20, long(rng() % 7) + 1));
      p.normalize();
      return p;
    };
    QPoly f = rnd_poly(9), g = rnd_poly(5);
    if (g.is_zero()) continue;
    auto [q, r] = poly_divrem(f, g);
    CHECK((f - (q * g + r)).is_zero());
    CHECK(r.degree() < g.degree());
  }
}

TEST_CASE("rational_roots examples") {
  QPoly f{Q(-1), Q(1)};  // x - 1
  CHECK(rational_roots(f) == std::set<Rational>{Q(1)});

  QPoly g{Q(1), Q(0), Q(1)};  // x^2 + 1
  CHECK(rational_roots(g).empty());

  // (22x + 9)(x^2 + 1) = 22x^3 + 9x^2 + 22x + 9
  QPoly h{Q(9), Q(22), Q(9), Q(22)};
  CHECK(rational_roots(h) == std::set<Rational>{Q(-9, 22)});

  CHECK_THROWS(rational_roots(QPoly::zero()));
}

TEST_CASE("rational_roots with repeated factors and zero roots") {
  // x^2 (x - 3)^2 (3x + 2)
  QPoly f = QPoly{Q(0), Q(1)} * QPoly{Q(0), Q(1)} * QPoly{Q(-3), Q(1)} *
            QPoly{Q(-3), Q(1)} * QPoly{Q(2), Q(3)};
  CHECK(rational_roots(f) == std::set<Rational>{Q(0), Q(3), Q(-2, 3)});
}

TEST_CASE("hensel_lift_root examples") {
  ZPoly f{Int(-2), Int(0), Int(1)};  // x^2 - 2
  CHECK(hensel_lift_root(f, Int(7), Int(3), 2) == 10);
  CHECK(mod_reduce(Int(10) * 10 - 2, Int(49)) == 0);

  ZPoly lin{Int(-5), Int(1)};  // x - 5
  CHECK(hensel_lift_root(lin, Int(11), Int(5), 4) == 5);

  // non-simple root: x^2 mod 5 at 0
  ZPoly sq{Int(0), Int(0), Int(1)};
  CHECK_THROWS(hensel_lift_root(sq, Int(5), Int(0), 3));
  // composite modulus
  CHECK_THROWS(hensel_lift_root(f, Int(15), Int(7), 2));
}

TEST_CASE("hensel round-trip property") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    Int ell(long(5 + rng() % 2000));
    mpz_nextprime(ell.get_mpz_t(), ell.get_mpz_t());
    // f = (x - a)(x - b) with a != b mod ell
    Int a(long(rng() % 1000)), b(long(rng() % 1000));
    if (mod_reduce(a - b, ell) == 0) continue;
    ZPoly f{a * b, -(a + b), Int(1)};
    unsigned long B = 1 + rng() % 6;
    Int r = hensel_lift_root(f, ell, mod_reduce(a, ell), B);
    Int M = pow_ui(ell, B);
    CHECK(zpoly_eval_mod(f, r, M) == 0);
    CHECK(mod_reduce(r - a, ell) == 0);
  }
}

TEST_CASE("rational_reconstruction examples") {
  CHECK(*rational_reconstruction(Int(65), Int(97), Int(6)) == Q(1, 3));
  CHECK(*rational_reconstruction(Int(4), Int(97), Int(6)) == Q(4));
  // exhaustive search over |n|, d <= 6 shows -1/2 is the (unique) match:
  // 48*2 = 96 = -1 (mod 97)
  CHECK(*rational_reconstruction(Int(48), Int(97), Int(6)) == Q(-1, 2));
  CHECK(!rational_reconstruction(Int(55), Int(97), Int(3)).has_value());
  CHECK_THROWS(rational_reconstruction(Int(48), Int(97), Int(7)));
}

TEST_CASE("rational_reconstruction round-trip property") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 500; ++iter) {
    long bound = long(1 + rng() % 1000);
    Int M = 2 * Int(bound) * bound * (37 + long(rng() % 1000)) + 1;
    long n = long(rng() % (2 * bound + 1)) - bound;
    long d = long(1 + rng() % bound);
    Int g = gcd(Int(n), Int(d));
    if (g != 1) { n /= long(g.get_si()); d /= long(g.get_si()); }
    if (gcd(Int(d), M) != 1) continue;
    Int a = mod_mul(Int(n), mod_inv(Int(d), M), M);
    auto rec = rational_reconstruction(a, M, Int(bound));
    REQUIRE(rec.has_value());
    CHECK(*rec == Rational(n, d));
  }
}

TEST_CASE("interpolate examples") {
  Int N(101);
  ZPoly c = interpolate({{Int(0), Int(5)}}, N);
  CHECK(c == ZPoly{Int(5)});

  ZPoly sq = interpolate({{Int(1), Int(1)}, {Int(2), Int(4)}, {Int(3), Int(9)}}, N);
  CHECK(sq == ZPoly{Int(0), Int(0), Int(1)});

  CHECK_THROWS(interpolate({{Int(1), Int(1)}, {Int(102), Int(4)}}, N));
}

TEST_CASE("interpolate re-evaluation property over prime powers") {
  std::mt19937_64 rng(17);
  Int N = pow_ui(Int(19), 5);
  for (int iter = 0; iter < 30; ++iter) {
    size_t n = 1 + rng() % 12;
    std::vector<std::pair<Int, Int>> pts;
    std::set<Int> used;
    while (pts.size() < n) {
      Int x(long(rng() % 19) + 19 * long(rng() % 1000));
      if (used.count(mod_reduce(x, Int(19)))) continue;
      used.insert(mod_reduce(x, Int(19)));
      pts.emplace_back(x, Int(long(rng() % 1000000)));
    }
    ZPoly p = interpolate(pts, N);
    CHECK(p.size() <= n);
    for (auto &[x, y] : pts) CHECK(zpoly_eval_mod(p, x, N) == mod_reduce(y, N));
  }
}

TEST_CASE("kronecker symbol values from quadratic characters") {
  CHECK(kronecker_symbol(-1L, Int(31)) == -1);
  CHECK(kronecker_symbol(2L, Int(349)) == -1);
  CHECK(kronecker_symbol(-23L, Int(241)) == -1);
}

TEST_CASE("kronecker agrees with Euler criterion for odd primes < 200") {
  for (Int q(3); q < 200; q = next_prime(q)) {
    for (long d = -30; d <= 30; ++d) {
      if (d == 0 || mod_reduce(Int(d), q) == 0) continue;
      Int e = mod_pow(mod_reduce(Int(d), q), (q - 1) / 2, q);
      int euler = (e == 1) ? 1 : -1;
      CHECK(kronecker_symbol(d, q) == euler);
    }
  }
}

TEST_CASE("primality and factorization helpers") {
  CHECK(is_prime(Int(19681)));
  CHECK(!is_prime(Int(19683)));
  CHECK(is_prime(Int("18446744073709551557")));
  CHECK_THROWS(is_prime(pow_ui(Int(2), 70)));

  auto f = factor(Int(1242));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<Int, int>(Int(2), 1));
  CHECK(f[1] == std::pair<Int, int>(Int(3), 3));
  CHECK(f[2] == std::pair<Int, int>(Int(23), 1));

  CHECK(squarefree_part(Int(-12)) == -3);
  CHECK(valuation(Rational(9261, 46), Int(23)) == -1);
}

TEST_CASE("residue context") {
  CHECK(ResidueContext(Int(19681)).is_prime_flag);
  CHECK(!ResidueContext(Int(100)).is_prime_flag);
  CHECK_THROWS(ResidueContext(Int(1)));
}

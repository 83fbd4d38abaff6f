#include <catch2/catch_amalgamated.hpp>

#include <selmer/family.hpp>
#include <selmer/curve_fp.hpp>
#include <selmer/registry.hpp>

using namespace selmer;

#ifndef SELMER_DATA_DIR
#define SELMER_DATA_DIR "data"
#endif

static std::string data_file(const char *name) {
  return std::string(SELMER_DATA_DIR) + "/" + name;
}

TEST_CASE("constant family has constant J equal to the curve's j-invariant") {
  FamilyData F;
  F.m = 3;
  F.a = QPoly{Rational(-4)};
  F.b = QPoly{Rational(4)};
  auto [num, den] = family_j(F);
  CHECK(num.degree() == 0);
  CHECK(den.degree() == 0);
  CurveQ E = CurveQ::short_model(Rational(-4), Rational(4));
  CHECK(num.eval(Rational(0)) / den.eval(Rational(0)) == E.j);
}

TEST_CASE("family with b identically zero has J identically 1728") {
  FamilyData F;
  F.m = 3;
  F.a = QPoly{Rational(1), Rational(2)};  // a(t) = 1 + 2t
  F.b = QPoly{};
  auto [num, den] = family_j(F);
  CHECK(num.degree() == 0);
  CHECK(den.degree() == 0);
  CHECK(num.eval(Rational(0)) / den.eval(Rational(0)) == Rational(1728));
}

TEST_CASE("m=5 family of 676B1: load, seed, and the paper's J value") {
  FamilyData F = load_family(data_file("family_m5.json"));
  CHECK(F.m == 5);
  CHECK(F.a.degree() == 20);
  CHECK(F.b.degree() == 30);
  // seed y^2 = x^3 - 5616x - 494208 sits at t = 0
  CHECK(F.a.eval(Rational(0)) == Rational(-5616));
  CHECK(F.b.eval(Rational(0)) == Rational(-494208));

  Rational s(-9, 22);
  auto [num, den] = family_j(F);
  CHECK(num.eval(s) / den.eval(s) == Rational(1168128));
}

TEST_CASE("m=5 family: find_specializations(1168128) = {-9/22}") {
  FamilyData F = load_family(data_file("family_m5.json"));
  auto roots = find_specializations(F, Rational(1168128));
  REQUIRE(roots.size() == 1);
  CHECK(*roots.begin() == Rational(-9, 22));
}

TEST_CASE("m=5 family: specialization at -9/22 is Q-isomorphic to 676E1") {
  FamilyData F = load_family(data_file("family_m5.json"));
  A1Result r = a1_test_member(F, curve_by_label("676E1"));
  REQUIRE(r.found);
  CHECK(*r.s == Rational(-9, 22));
  CHECK(*r.symplectic);
  // and the family contains its own seed at the base point
  A1Result self = a1_test_member(F, curve_by_label("676B1"));
  REQUIRE(self.found);
  CHECK(*self.s == 0);
}

TEST_CASE("m=5 family: no specialization matches a generic twist") {
  FamilyData F = load_family(data_file("family_m5.json"));
  CurveQ T = quadratic_twist(curve_by_label("676E1"), Int(7));
  A1Result r = a1_test_member(F, T);
  CHECK(!r.found);
}

TEST_CASE("find_specializations with target j = 0 verifies by evaluation") {
  FamilyData F = load_family(data_file("family_m5.json"));
  auto [num, den] = family_j(F);
  for (const Rational &r : find_specializations(F, Rational(0)))
    CHECK(num.eval(r) == 0);
}

TEST_CASE("m=4 families: 598B1 found anti-symplectically (Example 7.13)") {
  FamilyData F = load_family(data_file("family_m4.json"));
  FamilyData Ft = load_family(data_file("family_m4_twist.json"));
  const CurveQ &E2 = curve_by_label("598B1");
  // the symplectic family alone does not contain 598B1 ...
  A1Result sym = a1_test_member(F, E2);
  CHECK(!sym.found);
  // ... but the discriminant-twist family does
  A1Result r = a1_test_member(F, Ft, E2);
  REQUIRE(r.found);
  CHECK(*r.s == Rational(-5, 6942));
  CHECK(!*r.symplectic);
}

TEST_CASE("m=3 family of 676B1 seeds at t=0 and passes trace congruences") {
  FamilyData F = load_family(data_file("family_m3.json"));
  CHECK(F.m == 3);
  CHECK(F.a.eval(Rational(0)) == Rational(-5616));
  CHECK(F.b.eval(Rational(0)) == Rational(-494208));
}

TEST_CASE("family members have traces congruent to the seed's mod m") {
  const CurveQ seed = curve_by_label("676B1");
  for (const char *name : {"family_m3.json", "family_m5.json"}) {
    FamilyData F = load_family(data_file(name));
    for (const Rational &t0 : {Rational(1), Rational(2), Rational(-1, 3)}) {
      if (F.disc().eval(t0) == 0) continue;
      CurveQ Et = F.specialize(t0);
      Int m(F.m);
      for (Int q(5); q < 60; q = next_prime(q)) {
        if (mpz_divisible_p(Et.delta.get_mpz_t(), q.get_mpz_t())) continue;
        if (mpz_divisible_p(seed.delta.get_mpz_t(), q.get_mpz_t())) continue;
        CHECK(mod_reduce(frobenius_trace(Et, q) - frobenius_trace(seed, q), m)
              == 0);
      }
    }
  }
}

TEST_CASE("load_family rejects inconsistent data") {
  CHECK_THROWS(load_family(data_file("no_such_family.json")));
}

#pragma once

#include <selmer/curve_q.hpp>
#include <selmer/hensel.hpp>
#include <selmer/polynomial.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace selmer {

// Genus-zero family E~_t : y^2 = x^3 + a(t) x + b(t) of curves whose
// m-torsion is symplectically isomorphic to the seed curve's.
struct FamilyData {
  int m = 0;
  QPoly a, b;
  std::string seed_label;
  std::string source;

  CurveQ specialize(const Rational &t, std::string label = "") const {
    return CurveQ::short_model(a.eval(t), b.eval(t), std::move(label));
  }

  // 4a(t)^3 + 27b(t)^2, vanishing exactly at the singular specializations
  QPoly disc() const {
    return a * a * a * QPoly{Rational(4)} + b * b * QPoly{Rational(27)};
  }
};

// J(t) = 6912 a^3 / (4a^3 + 27b^2) as a reduced numerator/denominator pair
inline std::pair<QPoly, QPoly> family_j(const FamilyData &F) {
  QPoly num = F.a * F.a * F.a * QPoly{Rational(6912)};
  QPoly den = F.disc();
  if (den.is_zero()) throw std::domain_error("degenerate family");
  QPoly g = poly_gcd(num, den);
  if (!g.is_zero() && g.degree() >= 0) {
    num = poly_divrem(num, g).first;
    den = poly_divrem(den, g).first;
  }
  // normalize so the denominator's leading coefficient is 1
  Rational lead = den.leading();
  for (auto &c : num.c) c /= lead;
  for (auto &c : den.c) c /= lead;
  return {num, den};
}

// rational roots of J(t) - target, excluding singular specializations
inline std::set<Rational> find_specializations(const FamilyData &F,
                                               const Rational &target) {
  auto [num, den] = family_j(F);
  QPoly diff = num - den * QPoly{target};
  if (diff.degree() <= 0) {
    if (diff.is_zero())
      throw std::domain_error(
          "identically equal; every smooth specialization matches");
    return {};
  }
  QPoly d = F.disc();
  std::set<Rational> out;
  for (const Rational &r : rational_roots(diff))
    if (d.eval(r) != 0) out.insert(r);
  return out;
}

struct A1Result {
  bool found = false;
  std::optional<Rational> s;
  std::optional<bool> symplectic;
};

// search the family for a member Q-isomorphic to E2
inline A1Result a1_test_member(const FamilyData &F, const CurveQ &E2) {
  QPoly num = F.a * F.a * F.a * QPoly{Rational(6912)};
  QPoly den = F.disc();
  QPoly diff = num - den * QPoly{E2.j};
  if (diff.is_zero())
    throw std::domain_error(
        "identically equal; every smooth specialization matches");
  for (const Rational &s : find_specializations(F, E2.j)) {
    CurveQ Es = F.specialize(s);
    if (is_isomorphic_q(Es, E2)) return {true, s, true};
  }
  return {};
}

// m = 4 driver: the family of E1 detects symplectic isomorphisms, the family
// of the discriminant twist E1^Delta detects the anti-symplectic ones
inline A1Result a1_test_member(const FamilyData &F,
                               const FamilyData &F_twist, const CurveQ &E2) {
  A1Result r = a1_test_member(F, E2);
  if (r.found) return r;
  r = a1_test_member(F_twist, E2);
  if (r.found) r.symplectic = false;
  return r;
}

inline FamilyData load_family(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_family: cannot open " + path);
  nlohmann::json j;
  in >> j;
  FamilyData F;
  F.m = j.at("m").get<int>();
  if (F.m < 3 || F.m > 5)
    throw std::runtime_error("load_family: m must be 3, 4, or 5");
  F.seed_label = j.value("seed_label", "");
  F.source = j.value("source", "");
  auto parse_poly = [](const nlohmann::json &arr) {
    QPoly p;
    for (const auto &s : arr) {
      Rational c(s.get<std::string>());
      c.canonicalize();
      p.c.push_back(c);
    }
    while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
    return p;
  };
  F.a = parse_poly(j.at("a_coeffs"));
  F.b = parse_poly(j.at("b_coeffs"));
  if (F.a.is_zero() && F.b.is_zero())
    throw std::runtime_error("load_family: a and b are both zero");

  // load-time validation: J(t) at a smooth sample point must match the
  // j-invariant of the specialized curve
  QPoly d = F.disc();
  Rational t0(0);
  while (d.eval(t0) == 0) t0 += 1;
  auto [num, den] = family_j(F);
  Rational lhs = num.eval(t0) / den.eval(t0);
  if (lhs != F.specialize(t0).j)
    throw std::runtime_error("load_family: J(t) inconsistent at sample point");
  return F;
}

}  // namespace selmer

#pragma once

#include <selmer/integers.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace selmer {

// Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
// over Q, with the standard derived invariants cached.
struct CurveQ {
  Int a1, a2, a3, a4, a6;
  Int b2, b4, b6, b8, c4, c6, delta;
  Rational j;
  std::string label;  // optional registry label

  CurveQ(Int a1_, Int a2_, Int a3_, Int a4_, Int a6_, std::string label_ = "")
      : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)),
        a4(std::move(a4_)), a6(std::move(a6_)), label(std::move(label_)) {
    b2 = a1 * a1 + 4 * a2;
    b4 = 2 * a4 + a1 * a3;
    b6 = a3 * a3 + 4 * a6;
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4 = b2 * b2 - 24 * b4;
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    delta = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    if (delta == 0) throw std::domain_error("singular model");
    if ((c4 * c4 * c4 - c6 * c6) != 1728 * delta)
      throw std::logic_error("invariant identity c4^3 - c6^2 = 1728*delta violated");
    j = Rational(c4 * c4 * c4, delta);
    j.canonicalize();
  }

  // clear denominators of a rational model by the scaling x -> x/u^2,
  // y -> y/u^3 with u the common denominator
  static CurveQ from_rational(const Rational &a1r, const Rational &a2r,
                              const Rational &a3r, const Rational &a4r,
                              const Rational &a6r, std::string label = "") {
    Int u(1);
    for (const Rational *q : {&a1r, &a2r, &a3r, &a4r, &a6r})
      mpz_lcm(u.get_mpz_t(), u.get_mpz_t(), q->get_den().get_mpz_t());
    auto scaled = [&](const Rational &q, unsigned long e) {
      Rational v = q * Rational(pow_ui(u, e));
      if (v.get_den() != 1) throw std::logic_error("denominator clearing failed");
      return Int(v.get_num());
    };
    return CurveQ(scaled(a1r, 1), scaled(a2r, 2), scaled(a3r, 3),
                  scaled(a4r, 4), scaled(a6r, 6), std::move(label));
  }

  // short Weierstrass y^2 = x^3 + Ax + B over Q for this curve's class
  static CurveQ short_model(const Rational &A, const Rational &B,
                            std::string label = "") {
    return from_rational(Rational(0), Rational(0), Rational(0), A, B,
                         std::move(label));
  }

  std::array<Int, 5> coeffs() const { return {a1, a2, a3, a4, a6}; }

  std::string to_string() const {
    return "[" + a1.get_str() + "," + a2.get_str() + "," + a3.get_str() + "," +
           a4.get_str() + "," + a6.get_str() + "]";
  }
};

// quadratic twist by squarefree d != 0; j-invariant is preserved and
// (c4, c6) scale by (d^2, d^3)
inline CurveQ quadratic_twist(const CurveQ &E, Int d) {
  if (d == 0) throw std::domain_error("quadratic_twist: d must be nonzero");
  Int sf = squarefree_part(d);
  if (sf != d) throw std::domain_error("quadratic_twist: d must be squarefree");
  if (d == 1) return E;
  // model y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6
  return CurveQ(Int(0), Int(0), Int(0), -27 * d * d * E.c4,
                -54 * d * d * d * E.c6,
                E.label.empty() ? "" : E.label + "^(" + d.get_str() + ")");
}

// Q-isomorphism test with scaling witness u: a Weierstrass isomorphism
// exists iff j agrees and the c-invariants differ by (u^4, u^6).
inline std::optional<Rational> is_isomorphic_q(const CurveQ &E1, const CurveQ &E2) {
  if (E1.j != E2.j) return std::nullopt;
  if (E1.c6 != 0 && E1.c4 != 0) {
    // u^2 = (c6/c6') / (c4/c4')
    Rational u2 = Rational(E1.c6 * E2.c4, E2.c6 * E1.c4);
    u2.canonicalize();
    auto u = exact_sqrt(u2);
    if (!u) return std::nullopt;
    Rational u4 = u2 * u2;
    if (Rational(E1.c4) != u4 * Rational(E2.c4)) return std::nullopt;
    return *u;
  }
  if (E1.c6 == 0) {  // j = 1728: need u^4 = c4/c4'
    if (E2.c6 != 0) return std::nullopt;
    Rational q(E1.c4, E2.c4);
    q.canonicalize();
    auto u = exact_root(q, 4);
    if (!u) return std::nullopt;
    return *u;
  }
  // j = 0: need u^6 = c6/c6'
  if (E2.c4 != 0) return std::nullopt;
  Rational q(E1.c6, E2.c6);
  q.canonicalize();
  auto u = exact_root(q, 6);
  if (!u) return std::nullopt;
  return *u;
}

}  // namespace selmer

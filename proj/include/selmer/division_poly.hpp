#pragma once

#include <selmer/curve_q.hpp>
#include <selmer/polynomial.hpp>

#include <stdexcept>
#include <vector>

namespace selmer {

// Univariate division polynomials on the long Weierstrass model, in the
// x-coordinate of that model.  psi_m = f_m * psi_2^(m even) where
// psi_2^2 = F = 4x^3 + b2 x^2 + 2 b4 x + b6; the table stores f_0 .. f_M.
inline std::vector<QPoly> division_poly_table(const CurveQ &E, unsigned long M) {
  Rational b2(E.b2), b4(E.b4), b6(E.b6), b8(E.b8);
  QPoly F{b6, 2 * b4, b2, Rational(4)};
  QPoly F2 = F * F;

  std::vector<QPoly> f(std::max<unsigned long>(M, 4) + 1);
  f[0] = QPoly::zero();
  f[1] = QPoly{Rational(1)};
  f[2] = QPoly{Rational(1)};
  f[3] = QPoly{b8, 3 * b6, 3 * b4, b2, Rational(3)};
  f[4] = QPoly{b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8,
               10 * b6, 5 * b4, b2, Rational(2)};
  for (unsigned long m = 5; m <= M; ++m) {
    if (m % 2 == 1) {
      unsigned long n = (m - 1) / 2;
      QPoly t1 = f[n + 2] * f[n] * f[n] * f[n];
      QPoly t2 = f[n - 1] * f[n + 1] * f[n + 1] * f[n + 1];
      f[m] = (n % 2 == 0) ? F2 * t1 - t2 : t1 - F2 * t2;
    } else {
      unsigned long n = m / 2;
      f[m] = f[n] * (f[n + 2] * (f[n - 1] * f[n - 1]) -
                     f[n - 2] * (f[n + 1] * f[n + 1]));
    }
  }
  return f;
}

inline QPoly division_poly(const CurveQ &E, unsigned long m) {
  if (m < 1) throw std::domain_error("division_poly: m must be >= 1");
  return division_poly_table(E, m)[m];
}

// f whose roots are the x-coordinates of points of exact order p^n
struct ExactOrderPoly {
  Int p;
  unsigned long n;
  QPoly f;  // monic over Q
};

inline ExactOrderPoly exact_order_poly(const CurveQ &E, const Int &p,
                                       unsigned long n) {
  if (n < 1) throw std::domain_error("exact_order_poly: n must be >= 1");
  if (p == 2 && n == 1) {
    // the psi_2 factor itself: roots are the three 2-torsion x-coordinates
    QPoly F{Rational(E.b6), Rational(2 * E.b4), Rational(E.b2), Rational(4)};
    return {p, n, monic(F)};
  }
  unsigned long pn = pow_ui(p, n).get_ui();
  unsigned long pn1 = pow_ui(p, n - 1).get_ui();
  auto tab = division_poly_table(E, pn);
  auto [q, r] = poly_divrem(tab[pn], tab[pn1]);
  if (!r.is_zero())
    throw std::logic_error("exact_order_poly: convention mismatch");
  q = monic(q);
  long expected = Int((pow_ui(p, 2 * n) - pow_ui(p, 2 * n - 2)) / 2).get_si();
  if (q.degree() != expected)
    throw std::logic_error("exact_order_poly: unexpected degree");
  return {p, n, q};
}

}  // namespace selmer

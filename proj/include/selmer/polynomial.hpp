#pragma once

#include <selmer/integers.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace selmer {

// Dense univariate polynomial over a field-like ring R, coefficients stored
// lowest degree first.  Degrees in scope stay below ~600, so dense storage
// is fine.
template <class R>
struct UniPoly {
  std::vector<R> c;

  UniPoly() = default;
  UniPoly(std::initializer_list<R> coeffs) : c(coeffs) { normalize(); }
  explicit UniPoly(std::vector<R> coeffs) : c(std::move(coeffs)) { normalize(); }

  static UniPoly zero() { return UniPoly(); }
  static UniPoly constant(const R &v) {
    UniPoly p;
    p.c.push_back(v);
    p.normalize();
    return p;
  }
  static UniPoly x() { return UniPoly{R(0), R(1)}; }

  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  bool is_zero() const { return c.empty(); }
  // degree of the zero polynomial is -1 by convention
  long degree() const { return static_cast<long>(c.size()) - 1; }

  const R &operator[](size_t i) const {
    static const R zero{};
    return i < c.size() ? c[i] : zero;
  }

  R leading() const {
    if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
    return c.back();
  }

  R eval(const R &x0) const {
    R acc{};
    for (size_t i = c.size(); i-- > 0;) acc = acc * x0 + c[i];
    return acc;
  }

  bool operator==(const UniPoly &o) const { return c == o.c; }
};

template <class R>
UniPoly<R> operator+(const UniPoly<R> &a, const UniPoly<R> &b) {
  UniPoly<R> r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a[i] + b[i];
  r.normalize();
  return r;
}

template <class R>
UniPoly<R> operator-(const UniPoly<R> &a, const UniPoly<R> &b) {
  UniPoly<R> r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a[i] - b[i];
  r.normalize();
  return r;
}

template <class R>
UniPoly<R> operator-(const UniPoly<R> &a) {
  UniPoly<R> r = a;
  for (auto &v : r.c) v = -v;
  return r;
}

template <class R>
UniPoly<R> operator*(const UniPoly<R> &a, const UniPoly<R> &b) {
  if (a.is_zero() || b.is_zero()) return {};
  UniPoly<R> r;
  r.c.assign(a.c.size() + b.c.size() - 1, R(0));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.normalize();
  return r;
}

template <class R>
UniPoly<R> operator*(const R &s, const UniPoly<R> &a) {
  UniPoly<R> r = a;
  for (auto &v : r.c) v = s * v;
  r.normalize();
  return r;
}

// Euclidean division, f = q*g + r with deg r < deg g; exact over a field.
template <class R>
std::pair<UniPoly<R>, UniPoly<R>> poly_divrem(const UniPoly<R> &f,
                                              const UniPoly<R> &g) {
  if (g.is_zero()) throw std::domain_error("poly_divrem: division by zero polynomial");
  UniPoly<R> q, r = f;
  long dg = g.degree();
  if (f.degree() < dg) return {q, r};
  q.c.assign(f.degree() - dg + 1, R(0));
  R lg = g.leading();
  while (!r.is_zero() && r.degree() >= dg) {
    long k = r.degree() - dg;
    R t = r.leading() / lg;
    q.c[k] = t;
    // r -= t * x^k * g
    for (long i = 0; i <= dg; ++i) r.c[k + i] -= t * g.c[i];
    r.normalize();
  }
  q.normalize();
  return {q, r};
}

template <class R>
UniPoly<R> poly_gcd(UniPoly<R> a, UniPoly<R> b) {
  while (!b.is_zero()) {
    auto [q, r] = poly_divrem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) {
    R inv = R(1) / a.leading();
    a = inv * a;
  }
  return a;
}

template <class R>
UniPoly<R> derivative(const UniPoly<R> &f) {
  UniPoly<R> r;
  if (f.c.size() <= 1) return r;
  r.c.resize(f.c.size() - 1);
  for (size_t i = 1; i < f.c.size(); ++i) r.c[i - 1] = R(long(i)) * f.c[i];
  r.normalize();
  return r;
}

// f(g(x)) by Horner's rule
template <class R>
UniPoly<R> compose(const UniPoly<R> &f, const UniPoly<R> &g) {
  UniPoly<R> acc;
  for (size_t i = f.c.size(); i-- > 0;) {
    acc = acc * g;
    acc = acc + UniPoly<R>::constant(f.c[i]);
  }
  return acc;
}

template <class R>
UniPoly<R> monic(const UniPoly<R> &f) {
  if (f.is_zero()) return f;
  R inv = R(1) / f.leading();
  return inv * f;
}

using QPoly = UniPoly<Rational>;
using ZPoly = std::vector<Int>;  // integer coefficients, lowest degree first

// clear denominators and divide out integer content; sign of leading
// coefficient preserved
inline ZPoly primitive_integer_poly(const QPoly &f) {
  Int den(1);
  for (const auto &q : f.c)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  ZPoly z(f.c.size());
  Int content(0);
  for (size_t i = 0; i < f.c.size(); ++i) {
    Rational v = f.c[i] * Rational(den);
    z[i] = v.get_num();
    content = gcd(content, z[i]);
  }
  if (content > 1)
    for (auto &v : z) v /= content;
  return z;
}

inline QPoly to_qpoly(const ZPoly &z) {
  QPoly f;
  f.c.reserve(z.size());
  for (const auto &v : z) f.c.emplace_back(v);
  f.normalize();
  return f;
}

inline Int zpoly_eval(const ZPoly &f, const Int &x) {
  Int acc(0);
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

inline Int zpoly_eval_mod(const ZPoly &f, const Int &x, const Int &m) {
  Int acc(0);
  for (size_t i = f.size(); i-- > 0;) acc = mod_reduce(acc * x + f[i], m);
  return acc;
}

inline ZPoly zpoly_derivative(const ZPoly &f) {
  ZPoly r;
  for (size_t i = 1; i < f.size(); ++i) r.push_back(Int(long(i)) * f[i]);
  return r;
}

inline std::string poly_to_string(const QPoly &f, const std::string &var = "x") {
  if (f.is_zero()) return "0";
  std::string s;
  for (size_t i = f.c.size(); i-- > 0;) {
    if (f.c[i] == 0) continue;
    Rational v = f.c[i];
    if (!s.empty()) {
      s += (v < 0) ? " - " : " + ";
      if (v < 0) v = -v;
    }
    std::string coeff = v.get_str();
    if (i == 0) {
      s += coeff;
    } else {
      if (coeff != "1") s += coeff + "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace selmer

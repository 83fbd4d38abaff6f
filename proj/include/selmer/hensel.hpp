#pragma once

#include <selmer/integers.hpp>
#include <selmer/polynomial.hpp>

#include <optional>
#include <set>
#include <stdexcept>

namespace selmer {

// Modulus N >= 2 with a cached primality verdict, for Z/N arithmetic.
struct ResidueContext {
  Int modulus;
  bool is_prime_flag;

  explicit ResidueContext(Int m) : modulus(std::move(m)) {
    if (modulus < 2) throw std::domain_error("ResidueContext: modulus must be >= 2");
    is_prime_flag = mpz_sizeinbase(modulus.get_mpz_t(), 2) <= 64 && is_prime(modulus);
  }
};

// Lift a simple root r0 of f mod ell to the unique root mod ell^B by
// quadratic Newton iteration.
inline Int hensel_lift_root(const ZPoly &f, const Int &ell, const Int &r0,
                            unsigned long B) {
  if (!is_prime(ell)) throw std::domain_error("hensel_lift_root: modulus not prime");
  if (B == 0) throw std::domain_error("hensel_lift_root: target exponent must be >= 1");
  if (zpoly_eval_mod(f, r0, ell) != 0)
    throw std::domain_error("hensel_lift_root: r0 is not a root mod ell");
  ZPoly df = zpoly_derivative(f);
  if (zpoly_eval_mod(df, r0, ell) == 0)
    throw std::domain_error("hensel_lift_root: root not liftable");

  Int r = mod_reduce(r0, ell);
  unsigned long prec = 1;
  while (prec < B) {
    prec = std::min(2 * prec, B);
    Int m = pow_ui(ell, prec);
    Int fr = zpoly_eval_mod(f, r, m);
    Int dfr = zpoly_eval_mod(df, r, m);
    r = mod_reduce(r - fr * mod_inv(dfr, m), m);
  }
  return r;
}

// Balanced half-extended Euclid: recover n/d from a mod M with
// |n| <= n_bound, 0 < d <= d_bound.  Unique when 2*n_bound*d_bound < M.
inline std::optional<Rational> rational_reconstruction(const Int &a, const Int &M,
                                                      const Int &n_bound,
                                                      const Int &d_bound) {
  if (2 * n_bound * d_bound >= M)
    throw std::domain_error("rational_reconstruction: modulus too small for bound");
  Int r0 = M, r1 = mod_reduce(a, M);
  Int t0(0), t1(1);
  while (r1 > n_bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int t2 = t0 - q * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  Int n = r1, d = t1;
  if (d < 0) { d = -d; n = -n; }
  if (d > d_bound) return std::nullopt;
  if (gcd(n, d) != 1) return std::nullopt;
  if (gcd(d, M) != 1) return std::nullopt;
  return Rational(n, d);
}

inline std::optional<Rational> rational_reconstruction(const Int &a, const Int &M,
                                                      const Int &bound) {
  return rational_reconstruction(a, M, bound, bound);
}

// default bound floor(sqrt(M/2)) for both numerator and denominator
inline std::optional<Rational> rational_reconstruction(const Int &a, const Int &M) {
  Int b = sqrt((M - 1) / 2);
  while (2 * b * b >= M) --b;
  return rational_reconstruction(a, M, b, b);
}

// Lagrange interpolation over Z/N; node differences must be units.  The
// caller guarantees that by keeping nodes distinct mod a prime divisor of N.
inline ZPoly interpolate(const std::vector<std::pair<Int, Int>> &points,
                         const Int &N) {
  if (points.empty()) return {};
  size_t n = points.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (!mod_inv_opt(points[i].first - points[j].first, N))
        throw std::domain_error("interpolate: nodes collide mod ell");

  // Newton form: divided-difference table, then expand
  std::vector<Int> dd(n);
  for (size_t i = 0; i < n; ++i) dd[i] = mod_reduce(points[i].second, N);
  std::vector<Int> newton(n);
  newton[0] = dd[0];
  for (size_t k = 1; k < n; ++k) {
    for (size_t i = n - 1; i >= k; --i) {
      dd[i] = mod_mul(dd[i] - dd[i - 1],
                      mod_inv(points[i].first - points[i - k].first, N), N);
      if (i == k) break;
    }
    newton[k] = dd[k];
  }
  // expand: p(x) = n0 + (x-x0)(n1 + (x-x1)(...))
  ZPoly p{newton[n - 1]};
  for (size_t k = n - 1; k-- > 0;) {
    // p := p*(x - x_k) + newton[k]
    ZPoly q(p.size() + 1, Int(0));
    for (size_t i = 0; i < p.size(); ++i) {
      q[i + 1] = mod_reduce(q[i + 1] + p[i], N);
      q[i] = mod_reduce(q[i] - p[i] * points[k].first, N);
    }
    q[0] = mod_reduce(q[0] + newton[k], N);
    p = std::move(q);
  }
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

namespace detail {

// roots of f in F_ell by exhaustive scan; fine for the small primes used here
inline std::vector<Int> roots_mod_prime(const ZPoly &f, const Int &ell) {
  std::vector<Int> out;
  for (Int x(0); x < ell; ++x)
    if (zpoly_eval_mod(f, x, ell) == 0) out.push_back(x);
  return out;
}

inline ZPoly zpoly_mod(const ZPoly &f, const Int &ell) {
  ZPoly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = mod_reduce(f[i], ell);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

inline ZPoly zpoly_gcd_mod(ZPoly a, ZPoly b, const Int &ell) {
  a = zpoly_mod(a, ell);
  b = zpoly_mod(b, ell);
  while (!b.empty()) {
    // a mod b over F_ell
    Int inv = mod_inv(b.back(), ell);
    while (a.size() >= b.size()) {
      Int t = mod_mul(a.back(), inv, ell);
      size_t k = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i)
        a[k + i] = mod_reduce(a[k + i] - t * b[i], ell);
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace detail

// All rational zeros of f, found by root-finding mod a prime, Hensel
// lifting, rational reconstruction, and exact verification.  Complete: every
// rational root n/d has d | lc and |n| bounded by the trailing coefficient of
// the primitive squarefree part, so a large enough lift catches all of them.
inline std::set<Rational> rational_roots(const QPoly &f) {
  if (f.is_zero()) throw std::domain_error("rational_roots: identically zero");
  std::set<Rational> out;
  QPoly g = f;
  // strip x^k
  size_t shift = 0;
  while (shift < g.c.size() && g.c[shift] == 0) ++shift;
  if (shift > 0) {
    out.insert(Rational(0));
    g.c.erase(g.c.begin(), g.c.begin() + shift);
  }
  if (g.degree() <= 0) return out;
  ZPoly z = primitive_integer_poly(g);
  // if f is squarefree mod some good prime it is squarefree over Q and the
  // exact (and potentially very expensive) gcd with the derivative is skipped
  {
    ZPoly dz0 = zpoly_derivative(z);
    bool squarefree = false;
    Int ell(1000);
    for (int attempts = 0; attempts < 25 && !squarefree; ++attempts) {
      ell = next_prime(ell);
      if (mod_reduce(z.back(), ell) == 0) continue;
      if (detail::zpoly_gcd_mod(z, dz0, ell).size() == 1) squarefree = true;
    }
    if (!squarefree) {
      QPoly sf = poly_divrem(g, poly_gcd(g, derivative(g))).first;
      z = primitive_integer_poly(sf);
    }
  }
  if (z.size() == 2) {  // linear: -c0/c1
    Rational r(-z[0], z[1]);
    r.canonicalize();
    if (f.eval(r) == 0) out.insert(r);
    return out;
  }
  Int lead = z.back(), trail = z[0];
  Int height = std::max(abs(lead), abs(trail));
  ZPoly dz = zpoly_derivative(z);

  Int ell(1000);
  for (int attempts = 0; attempts < 200; ++attempts) {
    ell = next_prime(ell);
    if (mod_reduce(lead, ell) == 0) continue;
    auto gc = detail::zpoly_gcd_mod(z, dz, ell);
    if (gc.size() != 1) continue;  // not squarefree mod ell
    // lift precision so that 2*height^2 < ell^B
    unsigned long B = 1;
    Int target = 2 * height * height + 1;
    Int m = ell;
    while (m < target) { m *= m; B *= 2; }
    Int M = pow_ui(ell, B);
    for (const Int &r0 : detail::roots_mod_prime(z, ell)) {
      Int r = hensel_lift_root(z, ell, r0, B);
      auto cand = rational_reconstruction(r, M, height, abs(lead));
      if (!cand) continue;
      if (f.eval(*cand) == 0) out.insert(*cand);
    }
    return out;
  }
  throw std::runtime_error("rational_roots: no suitable prime found");
}

}  // namespace selmer

#pragma once

#include <selmer/curve_q.hpp>

#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace selmer {

struct PointFp {
  Int x, y;
  bool inf = true;

  PointFp() = default;
  PointFp(Int x_, Int y_) : x(std::move(x_)), y(std::move(y_)), inf(false) {}

  static PointFp infinity() { return PointFp(); }

  bool operator==(const PointFp &o) const {
    if (inf || o.inf) return inf == o.inf;
    return x == o.x && y == o.y;
  }
  bool operator<(const PointFp &o) const {
    if (inf != o.inf) return inf < o.inf;
    if (x != o.x) return x < o.x;
    return y < o.y;
  }
};

// Reduction of a rational model at a good prime ell > 3, stored as the
// completed-square curve y^2 = x^3 + Ax + B.  The substitution is
// x_short = x + b2/12, y_short = y + (a1 x + a3)/2, and `shift` keeps the
// x-offset so coordinates can be moved between the two models.
struct CurveFp {
  Int ell;
  Int A, B;
  Int shift;        // x_short = x_orig + shift (mod ell)
  Int a1, a3;       // original-model coefficients, for the y-offset
  Int n_points = 0; // cached by count_points

  Int to_short_x(const Int &x_orig) const { return mod_reduce(x_orig + shift, ell); }
  Int to_orig_x(const Int &x_short) const { return mod_reduce(x_short - shift, ell); }

  PointFp to_short_point(const Int &x_orig, const Int &y_orig) const {
    Int ys = mod_reduce(y_orig + (a1 * x_orig + a3) * mod_inv(Int(2), ell), ell);
    return PointFp{to_short_x(x_orig), ys};
  }

  PointFp to_orig_point(const PointFp &P) const {
    if (P.inf) return P;
    Int x = to_orig_x(P.x);
    Int y = mod_reduce(P.y - (a1 * x + a3) * mod_inv(Int(2), ell), ell);
    return PointFp{x, y};
  }
};

inline CurveFp reduce_curve(const CurveQ &E, const Int &ell) {
  if (ell <= 3 || !is_prime(ell))
    throw std::domain_error("reduce_curve: ell must be a prime > 3");
  if (mpz_divisible_p(E.delta.get_mpz_t(), ell.get_mpz_t()))
    throw std::domain_error("reduce_curve: bad reduction at ell");
  CurveFp C;
  C.ell = ell;
  C.A = mod_mul(-E.c4, mod_inv(Int(48), ell), ell);
  C.B = mod_mul(-E.c6, mod_inv(Int(864), ell), ell);
  C.shift = mod_mul(E.b2, mod_inv(Int(12), ell), ell);
  C.a1 = mod_reduce(E.a1, ell);
  C.a3 = mod_reduce(E.a3, ell);
  return C;
}

inline bool on_curve(const CurveFp &C, const PointFp &P) {
  if (P.inf) return true;
  Int lhs = mod_mul(P.y, P.y, C.ell);
  Int rhs = mod_reduce(P.x * P.x * P.x + C.A * P.x + C.B, C.ell);
  return lhs == rhs;
}

inline PointFp neg(const CurveFp &C, const PointFp &P) {
  if (P.inf) return P;
  return {P.x, mod_reduce(-P.y, C.ell)};
}

inline PointFp add(const CurveFp &C, const PointFp &P, const PointFp &Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  const Int &l = C.ell;
  Int lam;
  if (P.x == Q.x) {
    if (mod_reduce(P.y + Q.y, l) == 0) return PointFp::infinity();
    lam = mod_mul(3 * P.x * P.x + C.A, mod_inv(2 * P.y, l), l);
  } else {
    lam = mod_mul(Q.y - P.y, mod_inv(Q.x - P.x, l), l);
  }
  Int x3 = mod_reduce(lam * lam - P.x - Q.x, l);
  Int y3 = mod_reduce(lam * (P.x - x3) - P.y, l);
  return {x3, y3};
}

inline PointFp mul(const CurveFp &C, Int k, PointFp P) {
  if (k < 0) { k = -k; P = neg(C, P); }
  PointFp R = PointFp::infinity();
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) R = add(C, R, P);
    P = add(C, P, P);
    k >>= 1;
  }
  return R;
}

inline std::optional<Int> sqrt_mod(const Int &a0, const Int &p) {
  Int a = mod_reduce(a0, p);
  if (a == 0) return Int(0);
  if (p == 2) return a;
  if (kronecker_symbol(a, p) != 1) return std::nullopt;
  if (mod_reduce(p, Int(4)) == 3) return mod_pow(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  Int Q = p - 1;
  unsigned long S = mpz_scan1(Q.get_mpz_t(), 0);
  Q >>= S;
  Int z(2);
  while (kronecker_symbol(z, p) != -1) ++z;
  Int c = mod_pow(z, Q, p);
  Int t = mod_pow(a, Q, p);
  Int R = mod_pow(a, (Q + 1) / 2, p);
  unsigned long M = S;
  while (t != 1) {
    Int t2 = t;
    unsigned long i = 0;
    while (t2 != 1) { t2 = mod_mul(t2, t2, p); ++i; }
    Int b = c;
    for (unsigned long k = 0; k + i + 1 < M; ++k) b = mod_mul(b, b, p);
    M = i;
    c = mod_mul(b, b, p);
    t = mod_mul(t, c, p);
    R = mod_mul(R, b, p);
  }
  return R;
}

// both points with the given short-model x-coordinate, if any
inline std::vector<PointFp> points_with_x(const CurveFp &C, const Int &x_short) {
  Int x = mod_reduce(x_short, C.ell);
  Int rhs = mod_reduce(x * x * x + C.A * x + C.B, C.ell);
  auto y = sqrt_mod(rhs, C.ell);
  if (!y) return {};
  if (*y == 0) return {PointFp{x, Int(0)}};
  return {PointFp{x, *y}, PointFp{x, mod_reduce(-*y, C.ell)}};
}

// naive O(ell) count via the quadratic character; enough for the primes in
// scope, guarded so nobody feeds it a cryptographic-size field
inline Int count_points(CurveFp &C) {
  if (C.n_points != 0) return C.n_points;
  if (C.ell >= (1L << 22))
    throw std::domain_error("count_points: ell exceeds the naive-count bound 2^22");
  Int N = C.ell + 1;
  for (Int x(0); x < C.ell; ++x) {
    Int rhs = mod_reduce(x * x * x + C.A * x + C.B, C.ell);
    N += kronecker_symbol(rhs, C.ell);
  }
  C.n_points = N;
  return N;
}

inline Int trace(CurveFp &C) { return C.ell + 1 - count_points(C); }

// a_q for a good prime q of E; q = 2, 3 are counted on the original model
inline Int frobenius_trace(const CurveQ &E, const Int &q) {
  if (q <= 3) {
    if (mpz_divisible_p(E.delta.get_mpz_t(), q.get_mpz_t()))
      throw std::domain_error("frobenius_trace: bad reduction at q");
    Int N(1);  // infinity
    for (Int x(0); x < q; ++x)
      for (Int y(0); y < q; ++y) {
        Int F = y * y + E.a1 * x * y + E.a3 * y - x * x * x - E.a2 * x * x -
                E.a4 * x - E.a6;
        if (mod_reduce(F, q) == 0) ++N;
      }
    return q + 1 - N;
  }
  CurveFp C = reduce_curve(E, q);
  return trace(C);
}

inline PointFp random_point(const CurveFp &C, std::mt19937_64 &rng) {
  for (int tries = 0; tries < 100000; ++tries) {
    Int x(static_cast<unsigned long>(rng() % (1UL << 62)));
    x = mod_reduce(x, C.ell);
    auto pts = points_with_x(C, x);
    if (pts.empty()) continue;
    return pts[rng() % pts.size()];
  }
  throw std::runtime_error("random_point: no point found");
}

// order of P in the group of N points, given the factorization of N
inline Int point_order(const CurveFp &C, const PointFp &P, const Int &N) {
  Int ord = N;
  for (auto &[p, e] : factor(N)) {
    for (int i = 0; i < e; ++i) {
      Int cand = ord / p;
      if (mul(C, cand, P).inf)
        ord = cand;
      else
        break;
    }
  }
  return ord;
}

// basis (P1, P2) of E[p^n] inside E(F_ell); requires the full p^n-torsion
// to be rational.  Deterministic given the seed.
inline std::pair<PointFp, PointFp> torsion_basis(CurveFp &C, const Int &p,
                                                 unsigned long n,
                                                 unsigned long seed = 1) {
  Int pn = pow_ui(p, n);
  Int N = count_points(C);
  if (!mpz_divisible_p(N.get_mpz_t(), Int(pn * pn).get_mpz_t()))
    throw std::domain_error("torsion_basis: group order not divisible by p^2n");
  long e = valuation(N, p);
  Int cof = N / pow_ui(p, (unsigned long)e);  // prime-to-p cofactor

  std::mt19937_64 rng(seed);
  auto sylow_elem = [&]() {
    PointFp Q = mul(C, cof, random_point(C, rng));
    // order of Q is p^a; cut down to exact order p^n when a >= n
    long a = 0;
    PointFp T = Q;
    while (!T.inf) { T = mul(C, p, T); ++a; }
    if (a < long(n)) return PointFp::infinity();
    return mul(C, pow_ui(p, (unsigned long)(a - n)), Q);
  };

  for (int attempt = 0; attempt < 10000; ++attempt) {
    PointFp P1 = sylow_elem();
    if (P1.inf) continue;
    PointFp P2 = sylow_elem();
    if (P2.inf) continue;
    // independence: the p^{2n} combinations must be pairwise distinct
    std::set<PointFp> seen;
    PointFp R1 = PointFp::infinity();
    bool ok = true;
    for (Int a(0); a < pn && ok; ++a) {
      PointFp R = R1;
      for (Int b(0); b < pn && ok; ++b) {
        if (!seen.insert(R).second) ok = false;
        R = add(C, R, P2);
      }
      R1 = add(C, R1, P1);
    }
    if (ok) return {P1, P2};
  }
  throw std::runtime_error("torsion_basis: no independent pair found");
}

}  // namespace selmer

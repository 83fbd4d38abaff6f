#pragma once

#include <selmer/curve_q.hpp>
#include <selmer/hensel.hpp>

#include <climits>
#include <string>
#include <vector>

namespace selmer {

enum class Kodaira { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };

struct ReductionData {
  Int p;
  Kodaira type = Kodaira::I0;
  long nu = 0;      // n for I_n and I_n*
  int f = 0;        // conductor exponent
  long v_delta = 0; // valuation of the minimal discriminant
  bool split = false;  // meaningful for I_n with n >= 1
  std::array<Int, 5> minimal_model{};  // model at p reached by the algorithm

  bool good() const { return type == Kodaira::I0; }
  bool multiplicative() const { return type == Kodaira::In; }
  bool additive() const { return !good() && !multiplicative(); }

  std::string kodaira() const {
    switch (type) {
      case Kodaira::I0: return "I0";
      case Kodaira::In: return "I" + std::to_string(nu);
      case Kodaira::II: return "II";
      case Kodaira::III: return "III";
      case Kodaira::IV: return "IV";
      case Kodaira::I0star: return "I0*";
      case Kodaira::Instar: return "I" + std::to_string(nu) + "*";
      case Kodaira::IVstar: return "IV*";
      case Kodaira::IIIstar: return "III*";
      case Kodaira::IIstar: return "II*";
    }
    return "?";
  }
};

namespace detail {

inline Int exact_div(const Int &a, const Int &b) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Weierstrass model being worked on locally at p; translations (r,s,t)
// preserve delta, the u=p rescaling divides it by p^12.
struct TateModel {
  Int p;
  Int a1, a2, a3, a4, a6;
  Int b2, b4, b6, b8, delta;

  void compute() {
    b2 = a1 * a1 + 4 * a2;
    b4 = 2 * a4 + a1 * a3;
    b6 = a3 * a3 + 4 * a6;
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    delta = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  }

  void translate(const Int &r, const Int &s, const Int &t) {
    Int A1 = a1 + 2 * s;
    Int A2 = a2 - s * a1 + 3 * r - s * s;
    Int A3 = a3 + r * a1 + 2 * t;
    Int A4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    Int A6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    a1 = A1; a2 = A2; a3 = A3; a4 = A4; a6 = A6;
    compute();
  }

  void rescale() {  // u = p
    a1 = exact_div(a1, p);
    a2 = exact_div(a2, p * p);
    a3 = exact_div(a3, pow_ui(p, 3));
    a4 = exact_div(a4, pow_ui(p, 4));
    a6 = exact_div(a6, pow_ui(p, 6));
    compute();
  }

  // valuation with v(0) treated as +infinity
  long v(const Int &x) const { return x == 0 ? LONG_MAX / 2 : valuation(x, p); }
};

// singular point of the reduction mod p (the model is assumed singular mod p)
inline std::pair<Int, Int> singular_point(const TateModel &M) {
  const Int &p = M.p;
  if (p <= 3) {
    for (Int x(0); x < p; ++x)
      for (Int y(0); y < p; ++y) {
        Int F = y * y + M.a1 * x * y + M.a3 * y - x * x * x - M.a2 * x * x -
                M.a4 * x - M.a6;
        Int Fx = M.a1 * y - 3 * x * x - 2 * M.a2 * x - M.a4;
        Int Fy = 2 * y + M.a1 * x + M.a3;
        if (mod_reduce(F, p) == 0 && mod_reduce(Fx, p) == 0 &&
            mod_reduce(Fy, p) == 0)
          return {x, y};
      }
    throw std::logic_error("singular_point: none found");
  }
  // p >= 5: complete the square; x0 is the multiple root of
  // g = 4x^3 + b2 x^2 + 2 b4 x + b6
  ZPoly g{M.b6, 2 * M.b4, M.b2, Int(4)};
  ZPoly h = zpoly_gcd_mod(g, zpoly_derivative(g), p);
  Int x0;
  if (h.size() == 2)
    x0 = mod_mul(-h[0], mod_inv(h[1], p), p);
  else if (h.size() == 3)
    x0 = mod_mul(-h[1], mod_inv(2 * h[2], p), p);
  else
    throw std::logic_error("singular_point: unexpected gcd degree");
  Int y0 = mod_mul(-(M.a1 * x0 + M.a3), mod_inv(Int(2), p), p);
  return {x0, y0};
}

// put the model into the normal form v(a1)>=1, v(a2)>=1, v(a3)>=2,
// v(a4)>=2, v(a6)>=3 required before the cubic P(T) is examined
inline void normalize_additive(TateModel &M) {
  const Int &p = M.p;
  auto ok = [&](const TateModel &m) {
    return m.v(m.a1) >= 1 && m.v(m.a2) >= 1 && m.v(m.a3) >= 2 &&
           m.v(m.a4) >= 2 && m.v(m.a6) >= 3;
  };
  if (ok(M)) return;
  if (p <= 3) {
    Int p3 = pow_ui(p, 3);
    for (Int s(0); s < p; ++s)
      for (Int t(0); t < p3; ++t) {
        TateModel c = M;
        c.translate(Int(0), s, t);
        if (ok(c)) { M = c; return; }
      }
    throw std::logic_error("normalize_additive: search failed");
  }
  Int inv2 = mod_inv(Int(2), p);
  M.translate(Int(0), mod_mul(-M.a1, inv2, p), Int(0));
  Int p2 = p * p;
  M.translate(Int(0), Int(0), mod_mul(-M.a3, mod_inv(Int(2), p2), p2));
  if (!ok(M)) throw std::logic_error("normalize_additive: conditions not reached");
}

}  // namespace detail

// Tate's algorithm at p: Kodaira type, conductor exponent, and the split /
// non-split distinction in the multiplicative case.  Handles non-minimal
// input models by rescaling and restarting.
inline ReductionData tate_reduction(const CurveQ &E, const Int &p) {
  if (p < 2 || !is_prime(p)) throw std::domain_error("tate_reduction: p must be prime");
  detail::TateModel M{p, E.a1, E.a2, E.a3, E.a4, E.a6};
  M.compute();

  ReductionData R;
  R.p = p;

  for (;;) {
    long n = M.v(M.delta);
    if (n == 0) {
      R.type = Kodaira::I0;
      R.f = 0;
      break;
    }
    auto [x0, y0] = detail::singular_point(M);
    M.translate(x0, Int(0), y0);

    if (M.v(M.b2) == 0) {
      R.type = Kodaira::In;
      R.nu = n;
      R.f = 1;
      if (p == 2) {
        // tangent quadratic T^2 + a1 T - a2 over F_2
        R.split = mod_reduce(M.a2, p) == 0 || mod_reduce(1 + M.a1 - M.a2, p) == 0;
      } else {
        R.split = kronecker_symbol(M.b2, p) == 1;
      }
      break;
    }
    if (M.v(M.a6) < 2) { R.type = Kodaira::II; R.f = int(n); break; }
    if (M.v(M.b8) < 3) { R.type = Kodaira::III; R.f = int(n) - 1; break; }
    if (M.v(M.b6) < 3) { R.type = Kodaira::IV; R.f = int(n) - 2; break; }

    detail::normalize_additive(M);
    Int a21 = mod_reduce(detail::exact_div(M.a2, p), p);
    Int a42 = mod_reduce(detail::exact_div(M.a4, p * p), p);
    Int a63 = mod_reduce(detail::exact_div(M.a6, pow_ui(p, 3)), p);

    // root structure of P(T) = T^3 + a21 T^2 + a42 T + a63 over F_p
    ZPoly P{a63, a42, a21, Int(1)};
    int root_kind = 0;  // 0 distinct, 1 double+simple, 2 triple
    Int rt(0);          // multiple root when root_kind > 0
    if (p <= 3) {
      // gcd with P' misbehaves in small characteristic; a repeated root is
      // rational, so scan F_p and read off multiplicities directly
      for (Int r(0); r < p; ++r) {
        if (zpoly_eval_mod(P, r, p) != 0) continue;
        // synthetic division to count the multiplicity of r
        ZPoly q = P;
        int mult = 0;
        while (!q.empty() && zpoly_eval_mod(q, r, p) == 0) {
          ZPoly nq(q.size() - 1);
          Int carry(0);
          for (size_t i = q.size(); i-- > 1;) {
            carry = mod_reduce(carry * r + q[i], p);
            nq[i - 1] = carry;
          }
          q = std::move(nq);
          ++mult;
        }
        if (mult >= 3) { root_kind = 2; rt = r; }
        else if (mult == 2 && root_kind < 2) { root_kind = 1; rt = r; }
      }
    } else {
      ZPoly dP = detail::zpoly_mod(zpoly_derivative(P), p);
      ZPoly g = detail::zpoly_gcd_mod(P, dP, p);
      if (g.size() == 2) {
        root_kind = 1;
        rt = mod_mul(-g[0], mod_inv(g[1], p), p);
      } else if (g.size() == 3) {
        root_kind = 2;
        rt = mod_mul(-g[1], mod_inv(2 * g[2], p), p);
      }
    }

    if (root_kind == 0) {
      R.type = Kodaira::I0star;
      R.f = int(n) - 4;
      break;
    }

    if (root_kind == 1) {
      // type I_nu*: translate the double root to T = 0, then probe the
      // alternating quadratics until one is separable
      M.translate(rt * p, Int(0), Int(0));
      long m = 1;
      long nu;
      for (;;) {
        // nu = 2m-1 candidate: Y^2 + a_{3,m+1} Y - a_{6,2m+2}
        Int A = mod_reduce(detail::exact_div(M.a3, pow_ui(p, m + 1)), p);
        Int B = mod_reduce(detail::exact_div(M.a6, pow_ui(p, 2 * m + 2)), p);
        bool separable = (p == 2) ? (A != 0) : (mod_reduce(A * A + 4 * B, p) != 0);
        if (separable) { nu = 2 * m - 1; break; }
        Int yd = (p == 2) ? B : mod_mul(-A, mod_inv(Int(2), p), p);
        M.translate(Int(0), Int(0), yd * pow_ui(p, m + 1));

        // nu = 2m candidate: a_{2,1} X^2 + a_{4,m+2} X + a_{6,2m+3}
        Int al = mod_reduce(detail::exact_div(M.a2, p), p);
        Int be = mod_reduce(detail::exact_div(M.a4, pow_ui(p, m + 2)), p);
        Int ga = mod_reduce(detail::exact_div(M.a6, pow_ui(p, 2 * m + 3)), p);
        separable = (p == 2) ? (be != 0)
                             : (mod_reduce(be * be - 4 * al * ga, p) != 0);
        if (separable) { nu = 2 * m; break; }
        Int xd = (p == 2) ? mod_mul(ga, mod_inv(al, p), p)
                          : mod_mul(-be, mod_inv(2 * al, p), p);
        M.translate(xd * pow_ui(p, m + 1), Int(0), Int(0));
        ++m;
      }
      R.type = Kodaira::Instar;
      R.nu = nu;
      R.f = int(n) - 4 - int(nu);
      break;
    }

    // triple root: translate it to T = 0
    M.translate(rt * p, Int(0), Int(0));
    {
      // Y^2 + a_{3,2} Y - a_{6,4}
      Int A = mod_reduce(detail::exact_div(M.a3, p * p), p);
      Int B = mod_reduce(detail::exact_div(M.a6, pow_ui(p, 4)), p);
      bool separable = (p == 2) ? (A != 0) : (mod_reduce(A * A + 4 * B, p) != 0);
      if (separable) {
        R.type = Kodaira::IVstar;
        R.f = int(n) - 6;
        break;
      }
      Int yd = (p == 2) ? B : mod_mul(-A, mod_inv(Int(2), p), p);
      M.translate(Int(0), Int(0), yd * p * p);
    }
    if (M.v(M.a4) < 4) { R.type = Kodaira::IIIstar; R.f = int(n) - 7; break; }
    if (M.v(M.a6) < 6) { R.type = Kodaira::IIstar; R.f = int(n) - 8; break; }
    M.rescale();  // model was not minimal at p; start over
  }

  R.v_delta = M.delta == 0 ? 0 : M.v(M.delta);
  R.minimal_model = {M.a1, M.a2, M.a3, M.a4, M.a6};
  return R;
}

// conductor N = prod p^{f_p} over primes of bad reduction
inline Int conductor(const CurveQ &E) {
  Int N(1);
  for (auto &[p, e] : factor(abs(E.delta))) {
    auto R = tate_reduction(E, p);
    N *= pow_ui(p, (unsigned long)R.f);
  }
  return N;
}

// primes where j is non-integral, i.e. where E is potentially multiplicative
inline std::vector<Int> pot_mult_primes(const CurveQ &E) {
  std::vector<Int> out;
  Int den = E.j.get_den();
  for (auto &[p, e] : factor(den))
    out.push_back(p);
  return out;
}

}  // namespace selmer

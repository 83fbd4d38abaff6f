#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selmer {

using Int = mpz_class;
using Rational = mpq_class;

inline Int int_from(long v) { return Int(v); }

inline Int pow_ui(const Int &base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Int pow_ui(unsigned long base, unsigned long exp) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

// canonical representative in [0, m)
inline Int mod_reduce(const Int &a, const Int &m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int mod_mul(const Int &a, const Int &b, const Int &m) {
  return mod_reduce(a * b, m);
}

inline Int mod_pow(const Int &a, const Int &e, const Int &m) {
  Int r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline std::optional<Int> mod_inv_opt(const Int &a, const Int &m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    return std::nullopt;
  return r;
}

inline Int mod_inv(const Int &a, const Int &m) {
  auto r = mod_inv_opt(a, m);
  if (!r) throw std::domain_error("mod_inv: element not invertible");
  return *r;
}

// Kronecker symbol (d/q) with the standard conventions at 2 and -1.
inline int kronecker_symbol(const Int &d, const Int &q) {
  return mpz_kronecker(d.get_mpz_t(), q.get_mpz_t());
}

inline int kronecker_symbol(long d, const Int &q) {
  return mpz_si_kronecker(d, q.get_mpz_t());
}

// Deterministic Miller-Rabin below 2^64; larger inputs are rejected rather
// than accepted on probabilistic evidence.
inline bool is_prime(const Int &n) {
  if (n < 2) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
    throw std::domain_error("is_prime: input exceeds deterministic range (2^64)");
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  // this base set is deterministic for n < 2^64
  for (long a : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    Int x = mod_pow(Int(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = mod_mul(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline Int pollard_rho(const Int &n, unsigned long c) {
  // Brent's cycle variant
  Int x(2), y(2), q(1), ys, g(1);
  unsigned long r = 1, m = 128;
  auto f = [&](const Int &v) { return mod_reduce(v * v + c, n); };
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = f(y);
    for (unsigned long k = 0; k < r && g == 1; k += m) {
      ys = y;
      unsigned long lim = std::min(m, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        y = f(y);
        q = mod_mul(q, x > y ? x - y : y - x, n);
      }
      g = gcd(q, n);
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

inline void factor_rec(Int n, std::vector<Int> &out) {
  if (n == 1) return;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64 && is_prime(n)) {
    out.push_back(n);
    return;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64 &&
      mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    // large factor: accept the probabilistic verdict for factorization
    // purposes only (primality-critical paths use is_prime)
    out.push_back(n);
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Int r = sqrt(n);
    factor_rec(r, out);
    factor_rec(r, out);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    Int d = pollard_rho(n, c);
    if (d != n && d != 1) {
      factor_rec(d, out);
      factor_rec(n / d, out);
      return;
    }
  }
}

}  // namespace detail

// prime factorization n = prod p_i^{e_i}, p_i ascending; requires n >= 1
inline std::vector<std::pair<Int, int>> factor(Int n) {
  if (n < 1) throw std::domain_error("factor: input must be positive");
  std::vector<Int> primes;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      primes.emplace_back(p);
      n /= p;
    }
  }
  // trial division before rho; bad-reduction discriminants are smooth
  for (long p = 17; p < 100000 && n > 1; p += 2) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      primes.emplace_back(p);
      n /= p;
    }
  }
  if (n > 1) detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Int, int>> out;
  for (const auto &p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

inline Int squarefree_part(const Int &d) {
  if (d == 0) return 0;
  Int r = d < 0 ? Int(-1) : Int(1);
  for (auto &[p, e] : factor(abs(d)))
    if (e % 2) r *= p;
  return r;
}

// ord_p(n) for n != 0
inline int valuation(Int n, const Int &p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  int v = 0;
  n = abs(n);
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

inline int valuation(const Rational &q, const Int &p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

inline std::optional<Int> exact_sqrt(const Int &n) {
  if (n < 0) return std::nullopt;
  if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
  return sqrt(n);
}

// rational square root when it exists
inline std::optional<Rational> exact_sqrt(const Rational &q) {
  auto n = exact_sqrt(Int(q.get_num()));
  auto d = exact_sqrt(Int(q.get_den()));
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

inline std::optional<Int> exact_root(const Int &n, unsigned long k) {
  Int r;
  if (n < 0 && k % 2 == 0) return std::nullopt;
  int exactflag = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  if (!exactflag) return std::nullopt;
  return r;
}

inline std::optional<Rational> exact_root(const Rational &q, unsigned long k) {
  auto n = exact_root(Int(q.get_num()), k);
  auto d = exact_root(Int(q.get_den()), k);
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

inline Int next_prime(const Int &n) {
  Int r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

}  // namespace selmer

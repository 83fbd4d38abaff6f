#pragma once

#include <selmer/family.hpp>
#include <selmer/iso_a2.hpp>
#include <selmer/tate.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace selmer {

// m = p^k for p > 3, p^{k+1} for p = 2; for p = 3 the semistable refinement:
// 3^k unless some additive prime of either curve has Kodaira type II, IV,
// II* or IV*
inline Int select_m(const CurveQ &E1, const CurveQ &E2, const Int &p,
                    unsigned long k) {
  if (p > 3) return pow_ui(p, k);
  if (p == 2) return pow_ui(p, k + 1);
  bool bad_type = false;
  for (const CurveQ *E : {&E1, &E2}) {
    for (auto &[q, e] : factor(abs(E->delta))) {
      ReductionData rd = tate_reduction(*E, q);
      if (rd.type == Kodaira::II || rd.type == Kodaira::IV ||
          rd.type == Kodaira::IIstar || rd.type == Kodaira::IVstar)
        bad_type = true;
    }
  }
  return pow_ui(Int(3), bad_type ? k + 1 : k);
}

struct HypII {
  bool equal = false;
  std::vector<Int> S1, S2;
};

inline HypII check_hyp_ii(const CurveQ &E1, const CurveQ &E2) {
  HypII out;
  out.S1 = pot_mult_primes(E1);
  out.S2 = pot_mult_primes(E2);
  out.equal = out.S1 == out.S2;
  return out;
}

struct HypEntry {
  Int ell;
  std::string status;  // proven | inconclusive
  std::string note;
};

struct HypIII {
  std::string status = "proven";  // vacuously proven when S is empty
  std::vector<HypEntry> entries;
};

// Lemma 2.5 at each ell in S: p does not divide ord_ell(j(E1)), and either
// p != 2 or both curves have (genuinely) multiplicative reduction at ell
inline HypIII check_hyp_iii(const CurveQ &E1, const CurveQ &E2, const Int &p,
                            const std::vector<Int> &S) {
  HypIII out;
  for (const Int &ell : S) {
    HypEntry e{ell, "proven", ""};
    long ordj = valuation(E1.j.get_num(), ell) - valuation(E1.j.get_den(), ell);
    if (mod_reduce(Int(ordj), p) == 0) {
      e.status = "inconclusive";
      e.note = "p divides ord_" + ell.get_str() + "(j(E1)) = " +
               std::to_string(ordj);
    } else if (p == 2) {
      bool mult1 = tate_reduction(E1, ell).multiplicative();
      bool mult2 = tate_reduction(E2, ell).multiplicative();
      if (!mult1 || !mult2) {
        e.status = "inconclusive";
        e.note = "p = 2 and reduction at " + ell.get_str() +
                 " is not multiplicative for both curves";
      } else {
        e.note = "ord(j) = " + std::to_string(ordj) + ", both multiplicative";
      }
    } else {
      e.note = "ord(j) = " + std::to_string(ordj);
    }
    if (e.status != "proven") out.status = "inconclusive";
    out.entries.push_back(std::move(e));
  }
  return out;
}

struct HypIV {
  std::string status;  // proven | inconclusive
  std::string note;
};

// over Q: proven if p in S, or if k = 1, both curves have good reduction at
// p, and e = 1 < p - 1 (i.e. p > 2); Theorem 6.1's group-scheme route is
// not implemented and is only noted
inline HypIV check_hyp_iv(const CurveQ &E1, const CurveQ &E2, const Int &p,
                          unsigned long k, const std::vector<Int> &S) {
  if (std::find(S.begin(), S.end(), p) != S.end())
    return {"proven", "p lies in S"};
  bool good1 = !mpz_divisible_p(E1.delta.get_mpz_t(), p.get_mpz_t());
  bool good2 = !mpz_divisible_p(E2.delta.get_mpz_t(), p.get_mpz_t());
  if (k == 1 && good1 && good2 && p > 2)
    return {"proven", "k = 1, good reduction at p, and p > 2"};
  return {"inconclusive",
          "Theorem 3.1(iv) not established; the Theorem 6.1 group-scheme "
          "alternative is not machine-checked"};
}

struct TraceEntry {
  Int q, a1_mod, a2_mod;
};

struct TraceScan {
  std::vector<TraceEntry> entries;
  std::string verdict = "consistent";  // or "refutes hyp (i)"
  std::optional<Int> mismatch_q;
};

// necessary condition for E1[m] ~ E2[m]: a_q congruent mod m at every good
// prime q not dividing m; stops at the first mismatch
inline TraceScan trace_scan(const CurveQ &E1, const CurveQ &E2, const Int &m,
                            const Int &bound) {
  TraceScan out;
  for (Int q(2); q <= bound; q = next_prime(q)) {
    if (mod_reduce(m, q) == 0) continue;
    if (mpz_divisible_p(E1.delta.get_mpz_t(), q.get_mpz_t())) continue;
    if (mpz_divisible_p(E2.delta.get_mpz_t(), q.get_mpz_t())) continue;
    Int t1 = mod_reduce(frobenius_trace(E1, q), m);
    Int t2 = mod_reduce(frobenius_trace(E2, q), m);
    out.entries.push_back({q, t1, t2});
    if (t1 != t2) {
      out.verdict = "refutes hyp (i)";
      out.mismatch_q = q;
      return out;
    }
  }
  return out;
}

struct CheckOptions {
  Int trace_bound = Int(1000);
  Int split_bound = Int(25000);
  std::optional<Int> ell_pin;
  std::string family_path;        // optional A.1 family file
  std::string family_twist_path;  // optional m = 4 anti-symplectic family
  std::optional<QPoly> phi;       // optional externally supplied phi
  std::string data_dir;           // directory searched for default families
};

struct CompanionReport {
  Int p;
  unsigned long k = 0;
  Int m;
  HypII hyp_ii;
  HypIII hyp_iii;
  HypIV hyp_iv;
  TraceScan traces;
  std::string hyp_i_status = "inconclusive";
  std::string hyp_i_route;  // "a1" | "a2" | "phi-file" | ""
  std::string hyp_i_note;
  std::optional<IsoCertificate> certificate;
  std::optional<Rational> a1_s;
  std::optional<bool> a1_symplectic;
  std::string verdict = "inconclusive";
  std::string error;
};

namespace detail {

// try the A.1 route: the family file must be seeded by E1
inline bool try_a1(CompanionReport &rep, const CurveQ &E1, const CurveQ &E2,
                   const CheckOptions &opt) {
  long mval = rep.m.get_si();
  if (mval > 5) return false;
  std::string path = opt.family_path;
  if (path.empty() && !opt.data_dir.empty())
    path = opt.data_dir + "/family_m" + std::to_string(mval) + ".json";
  if (path.empty()) return false;
  FamilyData F;
  try {
    F = load_family(path);
  } catch (const std::exception &) {
    return false;
  }
  if (F.m != mval) return false;
  if (!is_isomorphic_q(F.specialize(Rational(0)), E1)) return false;

  A1Result r;
  if (mval == 4) {
    std::string tw = opt.family_twist_path;
    if (tw.empty() && !opt.data_dir.empty())
      tw = opt.data_dir + "/family_m4_twist.json";
    try {
      FamilyData Ft = load_family(tw);
      r = a1_test_member(F, Ft, E2);
    } catch (const std::exception &) {
      r = a1_test_member(F, E2);
    }
  } else {
    r = a1_test_member(F, E2);
  }
  if (!r.found) {
    rep.hyp_i_note = "no symplectic isomorphism found in the family of E1";
    return false;
  }
  rep.hyp_i_status = "proven";
  rep.hyp_i_route = "a1";
  rep.a1_s = r.s;
  rep.a1_symplectic = r.symplectic;
  return true;
}

inline bool try_a2(CompanionReport &rep, const CurveQ &E1, const CurveQ &E2,
                   const Int &p, unsigned long n, const CheckOptions &opt) {
  Int ell;
  try {
    ell = find_split_prime(E1, E2, p, n, opt.split_bound, opt.ell_pin);
  } catch (const std::exception &e) {
    rep.hyp_i_note = std::string("A.2: ") + e.what();
    return false;
  }
  CurveFp C1 = reduce_curve(E1, ell);
  CurveFp C2 = reduce_curve(E2, ell);
  auto [P1, P2] = torsion_basis(C1, p, n);

  if (opt.phi) {
    // externally supplied phi: recover consistent images from phi itself
    if (!phi_divisibility(E1, E2, p, n, *opt.phi)) {
      rep.hyp_i_note = "A.2: supplied phi fails the divisibility check";
      return false;
    }
    auto z = detail::qpoly_mod(*opt.phi, ell);
    if (!z) {
      rep.hyp_i_note = "A.2: supplied phi has a denominator divisible by ell";
      return false;
    }
    for (const PointFp &Q1 : points_with_x(
             C2, C2.to_short_x(zpoly_eval_mod(
                     *z, C1.to_orig_x(P1.x), ell))))
      for (const PointFp &Q2 : points_with_x(
               C2, C2.to_short_x(zpoly_eval_mod(
                       *z, C1.to_orig_x(P2.x), ell)))) {
        IsoCertificate cert =
            certify_iso(E1, E2, p, n, *opt.phi, ell, P1, P2, Q1, Q2);
        if (cert.valid()) {
          rep.hyp_i_status = "proven";
          rep.hyp_i_route = "phi-file";
          rep.certificate = cert;
          return true;
        }
      }
    rep.hyp_i_note = "A.2: supplied phi does not certify";
    return false;
  }

  auto res = search_phi(E1, E2, p, n, ell);
  if (!res) {
    rep.hyp_i_note = "A.2: no phi found over ell = " + ell.get_str();
    return false;
  }
  IsoCertificate cert =
      certify_iso(E1, E2, p, n, res->phi, ell, P1, P2, res->Q1, res->Q2);
  if (!cert.valid()) {
    rep.hyp_i_note = cert.checks_pass()
                         ? "A.2: twist elimination incomplete (character " +
                               cert.twist.failed_character + ")"
                         : "A.2: certificate checks failed";
    rep.certificate = cert;
    return false;
  }
  rep.hyp_i_status = "proven";
  rep.hyp_i_route = "a2";
  rep.certificate = cert;
  return true;
}

}  // namespace detail

inline CompanionReport check_pair(const CurveQ &E1, const CurveQ &E2,
                                  const Int &p, unsigned long k,
                                  CheckOptions opt = {}) {
  CompanionReport rep;
  rep.p = p;
  rep.k = k;
  try {
    rep.m = select_m(E1, E2, p, k);
    rep.traces = trace_scan(E1, E2, rep.m, opt.trace_bound);
    rep.hyp_ii = check_hyp_ii(E1, E2);
    rep.hyp_iii = check_hyp_iii(E1, E2, p, rep.hyp_ii.S1);
    rep.hyp_iv = check_hyp_iv(E1, E2, p, k, rep.hyp_ii.S1);

    if (rep.traces.verdict != "consistent") {
      rep.hyp_i_status = "refuted";
      rep.hyp_i_note = "trace mismatch mod m at q = " +
                       rep.traces.mismatch_q->get_str();
    } else {
      unsigned long n = (unsigned long)valuation(rep.m, p);
      if (!detail::try_a1(rep, E1, E2, opt))
        detail::try_a2(rep, E1, E2, p, n, opt);
    }

    if (rep.hyp_i_status == "refuted" || !rep.hyp_ii.equal)
      rep.verdict = "refuted";
    else if (rep.hyp_i_status == "proven" && rep.hyp_ii.equal &&
             rep.hyp_iii.status == "proven" && rep.hyp_iv.status == "proven")
      rep.verdict = "proven";
    else
      rep.verdict = "inconclusive";
  } catch (const std::exception &e) {
    rep.error = e.what();
    rep.verdict = "error";
  }
  return rep;
}

inline int exit_code(const CompanionReport &rep) {
  if (rep.verdict == "proven") return 0;
  if (rep.verdict == "refuted") return 2;
  if (rep.verdict == "inconclusive") return 3;
  return 1;
}

inline nlohmann::json to_json(const CompanionReport &rep, const CurveQ &E1,
                              const CurveQ &E2) {
  nlohmann::json j;
  j["curves"] = {
      {{"label", E1.label}, {"ainvs", E1.to_string()}},
      {{"label", E2.label}, {"ainvs", E2.to_string()}}};
  j["p"] = rep.p.get_str();
  j["k"] = rep.k;
  j["m"] = rep.m.get_str();
  auto primes = [](const std::vector<Int> &v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Int &q : v) a.push_back(q.get_str());
    return a;
  };
  j["hypotheses"]["ii"] = {{"equal", rep.hyp_ii.equal},
                           {"S1", primes(rep.hyp_ii.S1)},
                           {"S2", primes(rep.hyp_ii.S2)}};
  nlohmann::json iii = nlohmann::json::array();
  for (const auto &e : rep.hyp_iii.entries)
    iii.push_back({{"ell", e.ell.get_str()},
                   {"status", e.status},
                   {"note", e.note}});
  j["hypotheses"]["iii"] = {{"status", rep.hyp_iii.status}, {"primes", iii}};
  j["hypotheses"]["iv"] = {{"status", rep.hyp_iv.status},
                           {"note", rep.hyp_iv.note}};
  j["hypotheses"]["i"] = {{"status", rep.hyp_i_status},
                          {"route", rep.hyp_i_route},
                          {"note", rep.hyp_i_note}};
  if (rep.a1_s) {
    j["hypotheses"]["i"]["s"] = rational_str(*rep.a1_s);
    j["hypotheses"]["i"]["symplectic"] = *rep.a1_symplectic;
  }
  if (rep.certificate)
    j["certificate"] = to_json(*rep.certificate, E1, E2);
  nlohmann::json tr = nlohmann::json::array();
  for (const auto &e : rep.traces.entries)
    tr.push_back({{"q", e.q.get_str()},
                  {"a1_mod_m", e.a1_mod.get_str()},
                  {"a2_mod_m", e.a2_mod.get_str()}});
  j["trace_scan"] = {{"verdict", rep.traces.verdict}, {"entries", tr}};
  j["verdict"] = rep.verdict;
  if (!rep.error.empty()) j["error"] = rep.error;
  return j;
}

}  // namespace selmer

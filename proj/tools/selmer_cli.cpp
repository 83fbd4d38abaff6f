#include <selmer/companion.hpp>
#include <selmer/registry.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace selmer;
using nlohmann::json;

namespace {

std::string default_data_dir() {
  if (const char *env = std::getenv("SELMER_DATA_DIR")) return env;
#ifdef SELMER_DATA_DIR
  return SELMER_DATA_DIR;
#else
  return "data";
#endif
}

// registry label or "a1,a2,a3,a4,a6"
CurveQ parse_curve(const std::string &spec) {
  if (spec.find(',') == std::string::npos) return curve_by_label(spec);
  std::vector<Int> a;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) a.emplace_back(tok);
  if (a.size() != 5)
    throw std::runtime_error("curve spec needs 5 coefficients: " + spec);
  return CurveQ(a[0], a[1], a[2], a[3], a[4], spec);
}

QPoly load_phi_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phi file: " + path);
  json j;
  in >> j;
  QPoly phi;
  for (const auto &s : j) {
    Rational c(s.get<std::string>());
    c.canonicalize();
    phi.c.push_back(c);
  }
  while (!phi.c.empty() && phi.c.back() == 0) phi.c.pop_back();
  return phi;
}

json curve_json(const CurveQ &E) {
  json j;
  j["label"] = E.label;
  j["ainvs"] = {E.a1.get_str(), E.a2.get_str(), E.a3.get_str(),
                E.a4.get_str(), E.a6.get_str()};
  j["c4"] = E.c4.get_str();
  j["c6"] = E.c6.get_str();
  j["delta"] = E.delta.get_str();
  j["j"] = rational_str(E.j);
  return j;
}

void emit(const json &j, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << std::endl;
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << std::endl;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact verification of p^k-Selmer companionship hypotheses "
               "for pairs of elliptic curves over Q"};
  app.require_subcommand(1);

  std::string c1, c2, out_path, family_path, family_twist_path, phi_path,
      method = "auto";
  std::string ell_str, p_str{"2"};
  unsigned long k = 1;
  long m_opt = 0;
  Int bound(1000), split_bound(25000);
  std::string bound_str, split_bound_str;

  auto *inv = app.add_subcommand("invariants", "Weierstrass invariants");
  inv->add_option("curve", c1)->required();
  inv->add_option("-o,--output", out_path);

  std::string red_ell;
  auto *red = app.add_subcommand("reduction", "Reduction data at a prime");
  red->add_option("curve", c1)->required();
  red->add_option("ell", red_ell)->required();
  red->add_option("-o,--output", out_path);

  auto *pmp = app.add_subcommand("pot-mult-primes",
                                 "Primes of potentially multiplicative reduction");
  pmp->add_option("curve", c1)->required();
  pmp->add_option("-o,--output", out_path);

  auto *cond = app.add_subcommand("conductor", "Conductor");
  cond->add_option("curve", c1)->required();
  cond->add_option("-o,--output", out_path);

  auto *ts = app.add_subcommand("trace-scan", "Frobenius trace comparison mod m");
  ts->add_option("curve1", c1)->required();
  ts->add_option("curve2", c2)->required();
  ts->add_option("-m", m_opt)->required();
  ts->add_option("--bound", bound_str);
  ts->add_option("-o,--output", out_path);

  auto *fi = app.add_subcommand("find-iso",
                                "Construct/certify a torsion isomorphism");
  fi->add_option("curve1", c1)->required();
  fi->add_option("curve2", c2)->required();
  fi->add_option("-p", p_str)->required();
  fi->add_option("-k", k)->required();
  fi->add_option("--method", method)->check(CLI::IsMember({"auto", "a1", "a2"}));
  fi->add_option("--phi-file", phi_path);
  fi->add_option("--prime", ell_str);
  fi->add_option("--family", family_path);
  fi->add_option("--family-twist", family_twist_path);
  fi->add_option("--split-bound", split_bound_str);
  fi->add_option("-o,--output", out_path);

  auto *et = app.add_subcommand("eliminate-twist",
                                "Quadratic twist elimination over the character basis");
  et->add_option("curve1", c1)->required();
  et->add_option("curve2", c2)->required();
  et->add_option("-p", p_str)->required();
  et->add_option("-k", k)->required();
  et->add_option("--bound", bound_str);
  et->add_option("-o,--output", out_path);

  auto *cp = app.add_subcommand("check-pair", "Full Theorem 3.1 pipeline");
  cp->add_option("curve1", c1)->required();
  cp->add_option("curve2", c2)->required();
  cp->add_option("-p", p_str)->required();
  cp->add_option("-k", k)->required();
  cp->add_option("--trace-bound", bound_str);
  cp->add_option("--split-bound", split_bound_str);
  cp->add_option("--prime", ell_str);
  cp->add_option("--family", family_path);
  cp->add_option("--family-twist", family_twist_path);
  cp->add_option("--phi-file", phi_path);
  cp->add_option("-o,--output", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!bound_str.empty()) bound = Int(bound_str);
    if (!split_bound_str.empty()) split_bound = Int(split_bound_str);

    if (*inv) {
      emit(curve_json(parse_curve(c1)), out_path);
      return 0;
    }
    if (*red) {
      CurveQ E = parse_curve(c1);
      ReductionData rd = tate_reduction(E, Int(red_ell));
      json j;
      j["curve"] = E.label.empty() ? E.to_string() : E.label;
      j["ell"] = rd.p.get_str();
      j["kodaira"] = rd.kodaira();
      j["conductor_exponent"] = rd.f;
      j["v_delta"] = rd.v_delta;
      if (rd.multiplicative()) j["split"] = rd.split;
      emit(j, out_path);
      return 0;
    }
    if (*pmp) {
      CurveQ E = parse_curve(c1);
      json arr = json::array();
      for (const Int &q : pot_mult_primes(E)) arr.push_back(q.get_str());
      emit(json{{"curve", E.label.empty() ? E.to_string() : E.label},
                {"pot_mult_primes", arr}},
           out_path);
      return 0;
    }
    if (*cond) {
      CurveQ E = parse_curve(c1);
      emit(json{{"curve", E.label.empty() ? E.to_string() : E.label},
                {"conductor", conductor(E).get_str()}},
           out_path);
      return 0;
    }
    if (*ts) {
      CurveQ E1 = parse_curve(c1), E2 = parse_curve(c2);
      TraceScan scan = trace_scan(E1, E2, Int(m_opt), bound);
      json j;
      j["m"] = m_opt;
      j["verdict"] = scan.verdict;
      json arr = json::array();
      for (const auto &e : scan.entries)
        arr.push_back({{"q", e.q.get_str()},
                       {"a1_mod_m", e.a1_mod.get_str()},
                       {"a2_mod_m", e.a2_mod.get_str()}});
      j["entries"] = arr;
      emit(j, out_path);
      return scan.verdict == "consistent" ? 0 : 2;
    }
    if (*et) {
      CurveQ E1 = parse_curve(c1), E2 = parse_curve(c2);
      Int p(p_str);
      TwistElimination tw =
          eliminate_twist(E1, E2, p, k,
                          bound_str.empty() ? Int(100000) : bound);
      json j;
      j["complete"] = tw.complete;
      if (!tw.complete) j["failed_character"] = tw.failed_character;
      json basis = json::array(), wit = json::array();
      for (const Int &d : tw.basis) basis.push_back(d.get_str());
      for (const auto &w : tw.witnesses) {
        json sj = json::array();
        for (int s : w.signs) sj.push_back(s);
        wit.push_back({{"d", w.d.get_str()},
                       {"q", w.q.get_str()},
                       {"signs", sj},
                       {"a1_mod", w.a1_mod.get_str()},
                       {"a2_mod", w.a2_mod.get_str()}});
      }
      j["basis"] = basis;
      j["witnesses"] = wit;
      emit(j, out_path);
      return tw.complete ? 0 : 3;
    }
    if (*fi) {
      CurveQ E1 = parse_curve(c1), E2 = parse_curve(c2);
      Int p(p_str);
      CompanionReport rep;
      rep.p = p;
      rep.k = k;
      rep.m = pow_ui(p, k);
      CheckOptions opt;
      opt.data_dir = default_data_dir();
      opt.family_path = family_path;
      opt.family_twist_path = family_twist_path;
      opt.split_bound = split_bound;
      if (!ell_str.empty()) opt.ell_pin = Int(ell_str);
      if (!phi_path.empty()) opt.phi = load_phi_file(phi_path);
      bool ok = false;
      if (method == "a1" || method == "auto")
        ok = detail::try_a1(rep, E1, E2, opt);
      if (!ok && (method == "a2" || method == "auto"))
        ok = detail::try_a2(rep, E1, E2, p, k, opt);
      json j;
      j["m"] = rep.m.get_str();
      j["status"] = rep.hyp_i_status;
      j["route"] = rep.hyp_i_route;
      j["note"] = rep.hyp_i_note;
      if (rep.a1_s) {
        j["s"] = rational_str(*rep.a1_s);
        j["symplectic"] = *rep.a1_symplectic;
      }
      if (rep.certificate) j["certificate"] = to_json(*rep.certificate, E1, E2);
      emit(j, out_path);
      return ok ? 0 : 3;
    }
    if (*cp) {
      CurveQ E1 = parse_curve(c1), E2 = parse_curve(c2);
      Int p(p_str);
      CheckOptions opt;
      opt.data_dir = default_data_dir();
      opt.family_path = family_path;
      opt.family_twist_path = family_twist_path;
      opt.trace_bound = bound;
      opt.split_bound = split_bound;
      if (!ell_str.empty()) opt.ell_pin = Int(ell_str);
      if (!phi_path.empty()) opt.phi = load_phi_file(phi_path);
      CompanionReport rep = check_pair(E1, E2, p, k, opt);
      emit(to_json(rep, E1, E2), out_path);
      return exit_code(rep);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}

#pragma once

#include <selmer/curve_q.hpp>

#include <json.hpp>

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace selmer {

// Cremona-labelled curves used throughout the test corpus, loaded once from
// the data directory fixed at build time.
inline const std::map<std::string, CurveQ> &curve_registry() {
  static const std::map<std::string, CurveQ> reg = [] {
    std::map<std::string, CurveQ> m;
    std::string path = std::string(SELMER_DATA_DIR) + "/curves.json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve registry: " + path);
    nlohmann::json j;
    in >> j;
    for (const auto &c : j.at("curves")) {
      std::string label = c.at("label").get<std::string>();
      const auto &a = c.at("ainvs");
      if (a.size() != 5) throw std::runtime_error("bad ainvs for " + label);
      m.emplace(label,
                CurveQ(Int(a[0].get<std::string>()), Int(a[1].get<std::string>()),
                       Int(a[2].get<std::string>()), Int(a[3].get<std::string>()),
                       Int(a[4].get<std::string>()), label));
    }
    return m;
  }();
  return reg;
}

inline const CurveQ &curve_by_label(const std::string &label) {
  const auto &reg = curve_registry();
  auto it = reg.find(label);
  if (it == reg.end()) throw std::runtime_error("unknown curve label: " + label);
  return it->second;
}

}  // namespace selmer

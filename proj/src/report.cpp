#include "superdenom/report.hpp"

#include <fmt/color.h>
#include <fmt/format.h>

#include <json.hpp>

namespace superdenom {

using ojson = nlohmann::ordered_json;

std::string to_json(const VerificationReport& r) {
  ojson j;
  j["family"] = r.family;
  j["k"] = r.k;
  j["l"] = r.l;
  j["depth"] = r.depth;
  j["q_depth"] = r.q_depth;
  j["anchor"] = r.anchor;
  j["status"] = r.status;
  j["lhs_terms"] = r.lhs_terms;
  j["rhs_terms"] = r.rhs_terms;
  j["mismatches"] = ojson::array();
  for (const auto& m : r.mismatches) j["mismatches"].push_back({{"weight", m.weight}, {"lhs", m.lhs}, {"rhs", m.rhs}});
  j["checks"] = ojson::object();
  for (const auto& [name, c] : r.checks) j["checks"][name] = {{"pass", c.pass}, {"detail", c.detail}};
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  auto j = ojson::parse(text);
  VerificationReport r;
  r.family = j.at("family").get<std::string>();
  r.k = j.at("k").get<int>();
  r.l = j.at("l").get<int>();
  r.depth = j.at("depth").get<int>();
  r.q_depth = j.at("q_depth").get<int>();
  r.anchor = j.at("anchor").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.lhs_terms = j.at("lhs_terms").get<std::size_t>();
  r.rhs_terms = j.at("rhs_terms").get<std::size_t>();
  for (const auto& m : j.at("mismatches"))
    r.mismatches.push_back({m.at("weight").get<std::string>(), m.at("lhs").get<std::string>(),
                            m.at("rhs").get<std::string>()});
  for (const auto& [name, c] : j.at("checks").items())
    r.checks[name] = {c.at("pass").get<bool>(), c.at("detail").get<std::string>()};
  return r;
}

std::string to_text(const VerificationReport& r, bool color, std::size_t max_rows) {
  std::string out;
  const bool ok = r.status == "match";
  std::string verdict = fmt::format("{}  {} k={} l={} depth={} q_depth={}  lhs={} rhs={} mismatches={}",
                                    r.status, r.family, r.k, r.l, r.depth, r.q_depth, r.lhs_terms, r.rhs_terms,
                                    r.mismatches.size());
  if (color)
    out += fmt::format(fmt::fg(ok ? fmt::terminal_color::green : fmt::terminal_color::red), "{}", verdict);
  else
    out += verdict;
  out += "\n";
  out += fmt::format("anchor: {}\n", r.anchor);
  if (!r.mismatches.empty()) {
    out += fmt::format("{:<60} {:>14} {:>14}\n", "weight", "lhs", "rhs");
    for (std::size_t i = 0; i < r.mismatches.size() && i < max_rows; ++i) {
      const auto& m = r.mismatches[i];
      out += fmt::format("{:<60} {:>14} {:>14}\n", m.weight, m.lhs, m.rhs);
    }
    if (r.mismatches.size() > max_rows) out += fmt::format("... {} more\n", r.mismatches.size() - max_rows);
  }
  for (const auto& [name, c] : r.checks) out += fmt::format("  [{}] {}: {}\n", c.pass ? "pass" : "FAIL", name, c.detail);
  return out;
}

}  // namespace superdenom

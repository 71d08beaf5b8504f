#include "superdenom/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <unistd.h>

using namespace superdenom;

namespace {

struct RunConfig {
  std::string command;
  std::string family;
  int k = 0, l = 0;
  int depth = 6;
  std::string format = "text";
  std::string output;
  std::string exec = "parallel";
};

VerificationReport header(const AlgebraSpec& spec, int depth) {
  VerificationReport r;
  r.family = std::string(spec.token());
  r.k = spec.k;
  r.l = spec.l;
  r.depth = depth;
  return r;
}

void finish(VerificationReport& r) {
  bool ok = r.mismatches.empty();
  for (const auto& [n, c] : r.checks) ok = ok && c.pass;
  r.status = ok ? "match" : "mismatch";
}

std::string counts_table(const AlgebraSpec& spec) {
  auto counts = class_counts(spec);
  std::string out = fmt::format("{}  classes (j mod {}, parity): real shadows / imaginary mult\n", spec.name(), spec.m);
  for (int j = 0; j < spec.m; ++j)
    for (Parity p : {Parity::Even, Parity::Odd}) {
      auto c = counts.count({j, p}) ? counts.at({j, p}) : 0;
      auto it = spec.imaginary_mults.find({j, p});
      out += fmt::format("  ({}, {})  {:>4}  {:>3}\n", j, parity_name(p), c,
                         it == spec.imaginary_mults.end() ? 0 : it->second);
    }
  auto [d0, d1] = superalgebra_dims(spec);
  out += fmt::format("  dim even {}  dim odd {}\n", d0, d1);
  return out;
}

int run(const RunConfig& cfg, std::string& out) {
  auto fam = parse_family(cfg.family);
  if (!fam) {
    std::string tokens;
    for (const auto& t : family_tokens()) tokens += " " + t;
    std::cerr << fmt::format("unknown family '{}'; valid tokens:{}\n", cfg.family, tokens);
    return 2;
  }
  if (cfg.depth < 1) {
    std::cerr << "depth must be >= 1\n";
    return 2;
  }
  const Exec exec = cfg.exec == "serial" ? Exec::Serial : Exec::Parallel;
  const bool json = cfg.format == "json";
  const bool color = !json && cfg.output.empty() && std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
  AlgebraSpec spec = build_spec(*fam, cfg.k, cfg.l);

  if (cfg.command == "inspect") {
    auto v = validate_spec(spec);
    if (json) {
      nlohmann::ordered_json j;
      j["family"] = std::string(spec.token());
      j["name"] = spec.name();
      j["k"] = spec.k;
      j["l"] = spec.l;
      j["h_dual"] = to_pq(spec.h_dual);
      j["rho_hat"] = spec.rho_hat.to_string();
      j["data_sheet"] = data_sheet(spec);
      j["notes"] = v.notes;
      out = j.dump(2) + "\n";
    } else {
      out = data_sheet(spec);
      for (const auto& n : v.notes) out += "note: " + n + "\n";
    }
    return v.ok() ? 0 : 1;
  }

  VerificationReport r;
  if (cfg.command == "verify") {
    VerifyOptions opt;
    opt.exec = exec;
    r = verify(spec, cfg.depth, opt);
  } else {
    r = header(spec, cfg.depth);
    Window w = make_window(spec, cfg.depth);
    r.q_depth = w.q_depth;
    r.anchor = w.anchor.to_string();
    if (cfg.command == "counts") {
      r.checks["root_counts"] = root_count_report(spec);
      if (!json) out = counts_table(spec);
    } else if (cfg.command == "finite") {
      auto f = finite_identity_check(spec, cfg.depth, exec);
      r.anchor = f.lhs.anchor().to_string();
      r.lhs_terms = f.lhs.size();
      r.rhs_terms = f.rhs.size();
      r.mismatches = compare(f.lhs, f.rhs);
      r.checks["finite_identity"] = f.check;
    } else if (cfg.command == "casimir") {
      RhsOptions ro;
      ro.exec = exec;
      auto lhs = build_lhs(spec, w, exec);
      auto rhs = build_rhs_translation_sum(spec, w, ro).series;
      r.lhs_terms = lhs.size();
      r.rhs_terms = rhs.size();
      r.checks["casimir"] = casimir_support_check(spec, {&lhs, &rhs});
    } else if (cfg.command == "ratio") {
      auto q = ratio_invariant(spec, cfg.depth, exec);
      std::string coeffs;
      for (std::size_t n = 0; n < q.quotient.size(); ++n) coeffs += fmt::format("{}{}", n ? ", " : "", to_pq(q.quotient[n]));
      q.check.detail += "; quotient [" + coeffs + "]";
      r.checks["ratio"] = q.check;
    }
    finish(r);
  }
  out += json ? to_json(r) : to_text(r, color);
  return r.status == "match" ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Denominator identities of twisted affine Lie superalgebras, checked in exact arithmetic"};
  RunConfig cfg;
  std::string tokens;
  for (const auto& t : family_tokens()) tokens += "  " + t + "\n";
  app.footer("Family tokens:\n" + tokens + "\nExit codes: 0 all checks pass, 1 mismatch, 2 configuration error.");
  app.add_option("command", cfg.command, "verify | inspect | counts | finite | casimir | ratio")
      ->required()
      ->check(CLI::IsMember({"verify", "inspect", "counts", "finite", "casimir", "ratio"}));
  app.add_option("--family", cfg.family, "family token")->required();
  app.add_option("--k", cfg.k, "rank parameter k");
  app.add_option("--l", cfg.l, "rank parameter l");
  app.add_option("--depth", cfg.depth, "height below rho_hat to compare")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--output", cfg.output, "write the report to this file");
  app.add_option("--exec", cfg.exec, "kernel flavour")->check(CLI::IsMember({"serial", "parallel"}))->capture_default_str();
  app.set_config("--config", "", "flat key = value file mirroring the flags; flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string out;
  int rc = 0;
  try {
    rc = run(cfg, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (cfg.output.empty()) {
    std::cout << out;
  } else {
    std::ofstream f(cfg.output);
    if (!f) {
      std::cerr << "cannot write " << cfg.output << "\n";
      return 2;
    }
    f << out;
  }
  return rc;
}

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "qlmass/qlmass.h"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kCheckFailed = 1, kInvalid = 2, kEmbedding = 3, kSolver = 4 };

struct Failure {
  int code;
};

int exit_for(int code) {
  switch (code) {
    case QLM_E_NOT_EMBEDDABLE:
    case QLM_E_CURVATURE_BOUND:
    case QLM_E_ODE_BREAKDOWN:
      return kEmbedding;
    case QLM_E_SOLVER_DIVERGENCE:
    case QLM_E_NONPOSITIVE_SOLUTION:
    case QLM_E_NONPOSITIVE_FACTOR:
    case QLM_E_INTERNAL:
      return kSolver;
    default:
      return kInvalid;
  }
}

void check(int code) {
  if (code == QLM_OK) return;
  std::cerr << "qlmass: " << qlm_last_error() << "\n";
  throw Failure{exit_for(code)};
}

struct StringDeleter {
  void operator()(char* s) const { qlm_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct MetricDeleter {
  void operator()(qlm_metric* m) const { qlm_metric_free(m); }
};
struct RadialDeleter {
  void operator()(qlm_radial* d) const { qlm_radial_free(d); }
};
using Metric = std::unique_ptr<qlm_metric, MetricDeleter>;
using Radial = std::unique_ptr<qlm_radial, RadialDeleter>;

Json take(char* raw) {
  CString owned(raw);
  return Json::parse(owned.get());
}

std::string fixed6(const Json& v) {
  if (v.is_null()) return "nan";
  if (!v.is_number()) return v.dump();
  char buf[64];
  const double x = v.get<double>();
  std::snprintf(buf, sizeof buf, "%.6f", std::abs(x) < 5e-7 ? 0.0 : x);
  return buf;
}

std::string infinite_aware(const Json& v, bool empty_means_negative) {
  if (v.is_null()) return empty_means_negative ? "-inf" : "inf";
  return fixed6(v);
}

struct Common {
  std::string out;
  std::string format = "csv";
  double tol = 1e-6;
  double kappa = 0.0;
  std::size_t kappa_grid = 0;
  std::string p;
  std::size_t resolution = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output path (prefix for embed)");
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--tol", c.tol, "Validation tolerance")->check(CLI::PositiveNumber);
}

void add_bounds(CLI::App* cmd, Common& c) {
  auto* k = cmd->add_option("--kappa", c.kappa, "Single hyperbolic curvature scale")->check(CLI::PositiveNumber);
  auto* g = cmd->add_option("--kappa-grid", c.kappa_grid, "Number of kappa grid values")->check(CLI::PositiveNumber);
  k->excludes(g);
  cmd->add_option("--p", c.p, "Base point: center or the axis grid")->check(CLI::IsMember({"center", "grid"}));
}

qlm_bound_options bound_options(const Common& c, int default_p) {
  qlm_bound_options o;
  qlm_bound_options_default(&o);
  o.kappa = c.kappa;
  if (c.kappa_grid > 0) o.kappa_grid = c.kappa_grid;
  o.p_mode = c.p.empty() ? default_p : (c.p == "center" ? QLM_P_CENTER : QLM_P_GRID);
  if (c.resolution > 0) o.boundary_nodes = c.resolution;
  return o;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) {
    std::cerr << "qlmass: cannot write '" << path << "'\n";
    throw Failure{kInvalid};
  }
  f << text;
}

// Report goes to --out when given, else to stdout.
void deliver(const Common& c, const Json& report, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string text;
  if (c.format == "json") {
    text = report.dump(2) + "\n";
  } else {
    for (const auto& [k, v] : rows) text += k + "," + v + "\n";
  }
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
    if (c.format == "json") {
      for (const auto& [k, v] : rows) std::cout << k << "," << v << "\n";
    }
  }
}

int cmd_embed(const Common& c, const std::string& profile, const std::string& preset) {
  Metric metric;
  {
    qlm_metric* raw = nullptr;
    if (!profile.empty()) {
      check(qlm_metric_load_csv(profile.c_str(), c.tol, &raw));
    } else {
      check(qlm_preset(preset.c_str(), c.resolution, &raw, nullptr, nullptr));
    }
    metric.reset(raw);
  }
  std::string prefix = c.out;
  if (prefix.empty()) {
    prefix = profile.empty() ? preset.substr(0, preset.find(':')) : std::filesystem::path(profile).stem().string();
  }
  char* raw = nullptr;
  check(qlm_embed_write(metric.get(), c.kappa, prefix.c_str(), &raw));
  Json report = take(raw);
  std::vector<std::pair<std::string, std::string>> rows{{"total_H0_over_8pi", fixed6(report["total_H0_over_8pi"])}};
  if (c.kappa > 0.0 || c.kappa_grid > 0) {
    const auto o = bound_options(c, QLM_P_CENTER);
    double value = 0.0;
    check(qlm_lambda_upper(metric.get(), &o, &value, &raw));
    Json upper = take(raw);
    rows.emplace_back("lambda_upper", fixed6(upper["best"]["value"]));
    rows.emplace_back("lambda_upper_kappa", fixed6(upper["best"]["kappa"]));
    rows.emplace_back("lambda_upper_p", upper["best"]["p"].get<std::string>());
    report["lambda_upper"] = std::move(upper);
  }
  Common to_stdout = c;
  to_stdout.out.clear();
  std::string summary = prefix + "_summary.json";
  write_text(summary, report.dump(2) + "\n");
  deliver(to_stdout, report, rows);
  return kOk;
}

std::vector<std::pair<std::string, std::string>> mass_rows(const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows{
      {"lambda_lower", infinite_aware(j["lambda_lower"], true)},
      {"lambda_upper", infinite_aware(j["lambda_upper"], false)},
      {"total_H_over_8pi", fixed6(j["total_H_over_8pi"])},
      {"mass_lower", j["lambda_lower_is_empty"].get<bool>() ? "nan" : fixed6(j["mass_lower"])},
      {"mass_upper", infinite_aware(j["mass_upper"], false)}};
  if (j.contains("brown_york_mass")) {
    const auto& by = j["brown_york_mass"];
    rows.emplace_back("brown_york_mass", by.is_number() ? fixed6(by) : "nan");
  }
  return rows;
}

int cmd_mass(const Common& c, const std::vector<std::string>& domains, const std::vector<std::string>& presets) {
  if (domains.empty() && presets.empty()) {
    std::cerr << "qlmass: mass needs --domain or --preset\n";
    return kInvalid;
  }
  const auto o = bound_options(c, QLM_P_GRID);
  std::vector<Radial> parts;
  for (const auto& path : domains) {
    qlm_radial* raw = nullptr;
    check(qlm_radial_load_csv(path.c_str(), c.tol, &raw));
    parts.emplace_back(raw);
  }
  for (const auto& name : presets) {
    qlm_metric* boundary = nullptr;
    qlm_radial* domain = nullptr;
    check(qlm_preset(name.c_str(), o.boundary_nodes, &boundary, &domain, nullptr));
    Metric owned(boundary);
    if (domain != nullptr) {
      parts.emplace_back(domain);
      continue;
    }
    // A boundary metric without a domain: only the Lambda bracket exists.
    if (domains.size() + presets.size() > 1) {
      std::cerr << "qlmass: preset '" << name << "' has no domain and cannot be combined\n";
      return kInvalid;
    }
    char* raw = nullptr;
    check(qlm_lambda_bracket(owned.get(), &o, &raw));
    const Json j = take(raw);
    deliver(c, j,
            {{"lambda_lower", infinite_aware(j["lower"], true)}, {"lambda_upper", infinite_aware(j["upper"], false)}});
    return kOk;
  }
  char* raw = nullptr;
  if (parts.size() == 1) {
    check(qlm_mass_bracket(parts[0].get(), &o, &raw));
  } else {
    std::vector<const qlm_radial*> ptrs;
    for (const auto& p : parts) ptrs.push_back(p.get());
    check(qlm_mass_bracket_combined(ptrs.data(), ptrs.size(), &o, &raw));
  }
  const Json j = take(raw);
  deliver(c, j, mass_rows(j));
  return kOk;
}

int cmd_check(const Common& c, std::size_t seeds, std::uint64_t first_seed) {
  qlm_check_options o;
  qlm_check_options_default(&o);
  o.seeds = seeds;
  o.first_seed = first_seed;
  if (c.resolution > 0) o.resolution = c.resolution;
  char* raw = nullptr;
  int all = 0;
  check(qlm_check(&o, &all, &raw));
  const Json j = take(raw);
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& p : j["properties"]) {
    rows.emplace_back(p["name"].get<std::string>(), p["pass"].get<bool>() ? "PASS" : "FAIL");
    const auto& d = p["details"];
    if (d.contains("min_gap")) rows.emplace_back("min_gap", d["min_gap"].dump());
    if (d.contains("ratios")) {
      std::string r;
      for (const auto& x : d["ratios"]) r += (r.empty() ? "" : ";") + fixed6(x);
      rows.emplace_back(p["name"].get<std::string>() + "_ratios", r);
    }
  }
  deliver(c, j, rows);
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-local mass brackets, embeddings and conformal constructions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qlm_version()));

  Common embed_opts, mass_opts, check_opts;
  std::string profile, embed_preset;
  std::vector<std::string> domains, mass_presets;
  std::size_t seeds = 1000;
  std::uint64_t first_seed = 0;

  auto* embed = app.add_subcommand("embed", "Embed a sphere metric in R^3 and optionally H^3");
  auto* prof = embed->add_option("--profile", profile, "s,f profile CSV")->check(CLI::ExistingFile);
  auto* pre = embed->add_option("--preset", embed_preset, "Boundary metric of a preset");
  prof->excludes(pre);
  embed->add_option("--resolution", embed_opts.resolution, "Nodes for preset metrics")
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24));
  add_common(embed, embed_opts);
  add_bounds(embed, embed_opts);

  auto* mass = app.add_subcommand("mass", "Variational mass bracket of one or more radial domains");
  mass->add_option("--domain", domains, "r,h domain CSV (repeat for components)")->check(CLI::ExistingFile);
  mass->add_option("--preset", mass_presets, "round[:rho] schwarzschild[:m,R] cap[:r0] dumbbell[:depth]");
  mass->add_option("--resolution", mass_opts.resolution, "Boundary sphere nodes")
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24));
  add_common(mass, mass_opts);
  add_bounds(mass, mass_opts);

  auto* chk = app.add_subcommand("check", "Run the property suite");
  chk->add_option("--seeds", seeds, "Random fill-ins in the sweep");
  chk->add_option("--first-seed", first_seed, "First seed of the sweep");
  chk->add_option("--resolution", check_opts.resolution, "Coarsest radial intervals in the convergence study")
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 20));
  add_common(chk, check_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*embed) {
      if (profile.empty() && embed_preset.empty()) {
        std::cerr << "qlmass: embed needs --profile or --preset\n";
        return kInvalid;
      }
      return cmd_embed(embed_opts, profile, embed_preset);
    }
    if (*mass) return cmd_mass(mass_opts, domains, mass_presets);
    return cmd_check(check_opts, seeds, first_seed);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "qlmass: " << e.what() << "\n";
    return kSolver;
  }
}

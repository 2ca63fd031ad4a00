// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qlmass/checks.hpp"
#include "qlmass/conformal.hpp"
#include "qlmass/embedding.hpp"
#include "qlmass/fillins.hpp"
#include "qlmass/mass.hpp"
#include "qlmass/presets.hpp"

using namespace qlmass;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome round_sphere_totals() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto surf = embed_euclidean(AxisymmetricMetric::round_sphere(1.0, 1024));
  const double rel = std::abs(surf.total_mean_curvature() - 8.0 * pi) / (8.0 * pi);
  const double t = seconds_since(t0);
  return {rel < 1e-6 && t < 1.0, fmt("relative error %.3e (tol 1e-6), %.3f s (limit 1 s)", rel, t)};
}

double schwarzschild_by(double R, std::size_t nodes) {
  const auto metric = AxisymmetricMetric::round_sphere(R, nodes);
  const std::vector<double> H(metric.size(), 2.0 / R * std::sqrt(1.0 - 2.0 / R));
  return brown_york_mass(metric, H);
}

Outcome brown_york() {
  const double m3 = schwarzschild_by(3.0, 2048), m10 = schwarzschild_by(10.0, 2048),
               m100 = schwarzschild_by(100.0, 2048);
  const double exact = 3.0 * (1.0 - std::sqrt(1.0 / 3.0));
  const bool ok = std::abs(m3 - exact) < 1e-3 && m3 > m10 && m10 > m100 && m100 > 1.0;
  return {ok, fmt("m_BY(3) = %.6f (exact %.6f), m_BY(10) = %.6f, m_BY(100) = %.6f", m3, exact, m10, m100)};
}

Outcome hyperbolic_bound() {
  const auto sphere = AxisymmetricMetric::round_sphere(1.0, 1024);
  const auto s1 = embed_hyperbolic(sphere, 1.0);
  const double b1 = lambda_upper_bound(s1, axis_point(s1, 0.5), "center").value;
  const auto s0 = embed_hyperbolic(sphere, 1e-3);
  const double b0 = lambda_upper_bound(s0, axis_point(s0, 0.5), "center").value;
  const auto sweep = minimize_upper_bound(sphere, default_kappa_grid(sphere), default_axis_grid());
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& s : sweep.samples) lowest = std::min(lowest, s.value);
  const bool ok = std::abs(b1 - std::sqrt(2.0)) < 1e-4 && std::abs(b0 - 1.0) < 1e-3 && lowest >= 1.0 &&
                  sweep.skipped.empty();
  return {ok, fmt("kappa=1: %.8f, kappa=1e-3: %.8f, min over %zu grid points: %.10f", b1, b0, sweep.samples.size(),
                  lowest)};
}

Outcome shi_tam() {
  const auto sweep = checks::shitam_sweep(0, 1000, 1e-9, 1e-6, 1e-4);
  const bool ok = sweep.violations.empty() && sweep.rigidity_failures.empty() && sweep.seconds < 30.0;
  return {ok, fmt("1000 fill-ins, min gap %.3e, %zu violations, %zu equality cases (%zu not flat), %.2f s (limit 30 s)",
                  sweep.min_gap, sweep.violations.size(), sweep.equality_cases, sweep.rigidity_failures.size(),
                  sweep.seconds)};
}

Outcome convergence() {
  const auto radial = checks::radial_shell_convergence(64);
  const auto fem = checks::fem_shell_convergence(4, 2, 3);
  bool ok = true;
  for (double r : radial.ratios) ok = ok && r >= 3.0;
  for (double r : fem.ratios) ok = ok && r >= 3.0;
  ok = ok && std::abs(radial.finest_flux - 0.05) < 1e-3 && std::abs(fem.finest_flux - 0.05) < 1e-3;
  return {ok, fmt("radial ratios %.3f %.3f flux %.6f; FEM ratios %.3f %.3f flux %.6f", radial.ratios[0],
                  radial.ratios[1], radial.finest_flux, fem.ratios[0], fem.ratios[1], fem.finest_flux)};
}

Outcome doubling() {
  const auto band = schwarzschild_band(1.0, 3.0, 1024).domain;
  const auto d = doubling_construct(band, 0.1);
  bool ok = d.horizon_metric_mismatch < 1e-8 && std::abs(d.corner_jump) < 1e-8 && d.outer_margin > 0.0;
  double previous = std::numeric_limits<double>::infinity();
  std::string etas;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double eta = std::abs(doubling_construct(band, eps).eta);
    ok = ok && eta < previous;
    previous = eta;
    etas += fmt(" %.3e", eta);
  }
  return {ok, fmt("metric mismatch %.1e, corner jump %.1e, outer margin %.6f, |eta| over eps 0.2/0.1/0.05:%s",
                  d.horizon_metric_mismatch, d.corner_jump, d.outer_margin, etas.c_str())};
}

Outcome coherence() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"round", "schwarzschild", "cap", "dumbbell"}) {
    const auto p = presets::by_name(name, 1024);
    if (!p.domain) {
      const auto b = lambda_bracket(p.boundary);
      ok = ok && b.lower <= b.upper;
      detail += fmt("%s: [%s, %.4f]; ", name, b.lower_is_empty() ? "-inf" : fmt("%.4f", b.lower).c_str(), b.upper);
      continue;
    }
    const auto b = variational_mass_bracket(*p.domain);
    const double width = b.lambda_upper - b.lambda_lower;
    const double rel = width / b.total_H_over_8pi;
    bool good = b.lambda_lower <= b.lambda_upper;
    if (p.convex) {
      const std::vector<double> H(p.boundary.size(), boundary_mean_curvature_radial(*p.domain, Side::outer));
      const double by = brown_york_mass(p.boundary, H);
      good = good && rel < 0.05 && by >= b.mass_lower - 1e-9 && by <= b.mass_upper + 1e-9;
      detail += fmt("%s: width/total %.2e, BY %.6f in [%.6f, %.6f]; ", name, rel, by, b.mass_lower, b.mass_upper);
    }
    ok = ok && good;
  }
  return {ok, detail};
}

Outcome strictness() {
  bool ok = true;
  double previous = 0.0;
  std::string detail;
  for (double m : {0.25, 0.5, 1.0}) {
    const auto b = variational_mass_bracket(schwarzschild_band(m, 3.0, 1024).domain);
    const double margin = b.lambda_lower - b.total_H_over_8pi;
    ok = ok && margin > 0.0 && margin > previous;
    previous = margin;
    detail += fmt("m=%.2f margin %.6f; ", m, margin);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"round-sphere totals", round_sphere_totals},
      {"Brown-York Schwarzschild", brown_york},
      {"hyperbolic upper bound", hyperbolic_bound},
      {"fill-in sweep and rigidity", shi_tam},
      {"conformal solver convergence", convergence},
      {"doubling construction", doubling},
      {"mass-bracket coherence", coherence},
      {"strict lower-bound margin", strictness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu (%s): %s | %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}

#include "qlmass/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "qlmass/conformal.hpp"
#include "qlmass/error.hpp"
#include "qlmass/fillins.hpp"
#include "qlmass/meshgen.hpp"
#include "qlmass/parallel.hpp"
#include "qlmass/presets.hpp"

namespace qlmass::checks {

namespace {

double shell_exact(double rho) { return 1.1 - 0.2 / rho; }

const BoundaryConditions kShellBC{BoundaryCondition::dirichlet(1.0), BoundaryCondition::dirichlet(0.9)};

void fill_ratios(Convergence& c) {
  for (std::size_t k = 0; k + 1 < c.max_error.size(); ++k) c.ratios.push_back(c.max_error[k] / c.max_error[k + 1]);
}

io::Json convergence_json(const Convergence& c) {
  io::Json levels = io::Json::array();
  for (const auto& l : c.levels) levels.push_back(l);
  return io::Json{{"levels", std::move(levels)},
                  {"max_error", io::numbers(c.max_error)},
                  {"ratios", io::numbers(c.ratios)},
                  {"finest_flux", io::number(c.finest_flux)}};
}

}  // namespace

Convergence radial_shell_convergence(std::size_t intervals) {
  if (intervals < 16) throw Error(Errc::invalid_argument, "resolution must be at least 16");
  Convergence c;
  for (std::size_t level = 0; level < 3; ++level) {
    const std::size_t n = (intervals << level) + 1;
    std::vector<double> r(n), h(n), dh(n, 1.0), d2h(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) r[i] = h[i] = 1.0 + static_cast<double>(i) / static_cast<double>(n - 1);
    const auto domain =
        RadialDomain::from_profile(std::move(r), std::move(h), std::move(dh), std::move(d2h), InnerRole::cut);
    const auto s = solve_conformal(domain, ScalarField::on(domain, 0.0), ScalarField::on(domain, 0.0), kShellBC);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(s.u[i] - shell_exact(domain.r()[i])));
    c.levels.push_back(std::to_string(n - 1) + " intervals");
    c.max_error.push_back(err);
    c.finest_flux = s.normal_derivative_at(BoundaryTag::outer);
  }
  fill_ratios(c);
  return c;
}

Convergence fem_shell_convergence(std::size_t frequency, std::size_t layers, std::size_t levels) {
  Convergence c;
  for (std::size_t level = 0; level < levels; ++level) {
    const std::size_t k = frequency << level, m = layers << level;
    const auto mesh = meshgen::shell(1.0, 2.0, k, m);
    const auto domain = meshgen::to_domain(mesh);
    const std::size_t n = domain.vertex_count();
    const auto s = solve_conformal(domain, ScalarField(n, 0.0), ScalarField(n, 0.0), kShellBC);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = mesh.points[i];
      err = std::max(err, std::abs(s.u[i] - shell_exact(std::hypot(p[0], p[1], p[2]))));
    }
    c.levels.push_back("frequency " + std::to_string(k) + ", layers " + std::to_string(m));
    c.max_error.push_back(err);
    c.finest_flux = s.normal_derivative_at(BoundaryTag::outer);
  }
  fill_ratios(c);
  return c;
}

ShiTamSweep shitam_sweep(std::uint64_t first_seed, std::size_t seeds, double gap_tol, double equality_threshold,
                         double flatness_tol) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ShiTamResult> results(seeds);
  parallel_for(seeds, [&](std::size_t i) {
    results[i] = shitam_check(random_radial_fillin(first_seed + i), equality_threshold);
  });
  ShiTamSweep out;
  out.count = seeds;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seeds; ++i) {
    const auto& r = results[i];
    const std::uint64_t seed = first_seed + i;
    if (r.gap < out.min_gap) {
      out.min_gap = r.gap;
      out.min_gap_seed = seed;
    }
    if (r.gap < -gap_tol) out.violations.push_back(seed);
    if (r.equality) {
      ++out.equality_cases;
      if (r.flatness >= flatness_tol) out.rigidity_failures.push_back(seed);
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace {

Property shitam_property(const CheckOptions& o) {
  const auto sweep = shitam_sweep(o.first_seed, o.seeds);
  Property p{"shi_tam_sweep", sweep.violations.empty() && sweep.rigidity_failures.empty(), {}};
  p.details = io::Json{{"seeds", sweep.count},
                       {"first_seed", o.first_seed},
                       {"min_gap", io::number(sweep.min_gap)},
                       {"min_gap_seed", sweep.min_gap_seed},
                       {"violations", sweep.violations},
                       {"equality_cases", sweep.equality_cases},
                       {"rigidity_failures", sweep.rigidity_failures}};
  return p;
}

Property doubling_property(const CheckOptions& o) {
  const auto band = presets::schwarzschild(1.0, 3.0, 1024).domain.value();
  io::Json runs = io::Json::array();
  bool pass = true;
  // eta is signed; the closeness H_g2 -> H_g~ is its magnitude.
  double previous_eta = std::numeric_limits<double>::infinity();
  for (const double eps : {0.2, 0.1, 0.05}) {
    const auto d = doubling_construct(band, eps);
    const bool ok = d.horizon_metric_mismatch < o.tol && std::abs(d.corner_jump) < o.tol && d.outer_margin > 0.0 &&
                    std::abs(d.eta) < previous_eta;
    pass = pass && ok;
    previous_eta = std::abs(d.eta);
    runs.push_back(io::Json{{"epsilon", eps},
                            {"horizon_metric_mismatch", io::number(d.horizon_metric_mismatch)},
                            {"corner_jump", io::number(d.corner_jump)},
                            {"outer_margin", io::number(d.outer_margin)},
                            {"eta", io::number(d.eta)},
                            {"pass", ok}});
  }
  return {"doubling_schwarzschild", pass, io::Json{{"mass", 1.0}, {"outer_area_radius", 3.0}, {"runs", runs}}};
}

// Laws applied to an explicit factor against the warped product rebuilt from
// the deformed metric.
Property conformal_law_property() {
  const auto cap = presets::cap(1.0, 1024).domain.value();
  std::vector<double> u(cap.size()), du(cap.size());
  for (std::size_t i = 0; i < cap.size(); ++i) {
    const double r = cap.r()[i];
    u[i] = 1.0 + 0.1 * r * r;
    du[i] = 0.2 * r;
  }
  const double dnu = du.back();
  const ScalarField field(u);
  const auto report = conformal_laws(cap, field, std::nullopt, dnu);
  const auto deformed = cap.conformally_deformed(u, nullptr, &dnu);
  const auto R_direct = radial_scalar_curvature(deformed);
  double R_err = 0.0;
  for (std::size_t i = 0; i < cap.size(); ++i) R_err = std::max(R_err, std::abs(R_direct[i] - report.R_new[i]));
  const double H_direct = boundary_mean_curvature_radial(deformed, Side::outer);
  const double H_err = std::abs(H_direct - report.new_H.back());
  const bool pass = R_err < 1e-4 && H_err < 1e-8;
  return {"conformal_law_consistency", pass,
          io::Json{{"max_scalar_curvature_difference", io::number(R_err)},
                   {"outer_mean_curvature_difference", io::number(H_err)}}};
}

Property scalar_flat_property() {
  const auto cap = presets::cap(1.0, 1024).domain.value();
  const auto s = scalar_flat_deformation(cap);
  const double max_R = std::max(std::abs(s.report.min_R_new),
                                std::abs(*std::max_element(s.report.R_new.begin(), s.report.R_new.end())));
  const bool pass = s.report.boundary_metric_preserved() && max_R < 1e-4 && s.total_H_new > s.total_H_old;
  return {"scalar_flat_cap", pass,
          io::Json{{"max_abs_R_new", io::number(max_R)},
                   {"total_H_old", io::number(s.total_H_old)},
                   {"total_H_new", io::number(s.total_H_new)}}};
}

Property perturbation_property() {
  const auto ball = presets::round(1.0, 513).domain.value();
  const auto weak = weak_meanconvex_fix(ball, 0.1);
  const auto pos = positivity_perturbation(ball, 0.1);
  const bool pass = weak.report.boundary_metric_preserved() && weak.min_H_new > weak.min_H_old &&
                    pos.report.boundary_metric_preserved() && pos.report.min_R_new > 0.0;
  return {"perturbations_flat_ball", pass,
          io::Json{{"weak_fix", io::Json{{"min_H_old", io::number(weak.min_H_old)},
                                         {"min_H_new", io::number(weak.min_H_new)}}},
                   {"positivity", io::Json{{"min_R_new", io::number(pos.report.min_R_new)},
                                           {"total_H_old", io::number(pos.total_H_old)},
                                           {"total_H_new", io::number(pos.total_H_new)}}}}};
}

Property convergence_property(const std::string& name, const Convergence& c) {
  const bool ratios_ok = std::all_of(c.ratios.begin(), c.ratios.end(), [](double r) { return r >= 3.0; });
  const bool flux_ok = std::abs(c.finest_flux - 0.05) < 1e-3;
  return {name, ratios_ok && flux_ok, convergence_json(c)};
}

template <class F>
Property guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, false, io::Json{{"error", e.what()}}};
  }
}

}  // namespace

std::vector<Property> run_suite(const CheckOptions& o) {
  std::vector<Property> out;
  out.push_back(guarded("shi_tam_sweep", [&] { return shitam_property(o); }));
  out.push_back(guarded("doubling_schwarzschild", [&] { return doubling_property(o); }));
  out.push_back(guarded("conformal_law_consistency", [] { return conformal_law_property(); }));
  out.push_back(guarded("scalar_flat_cap", [] { return scalar_flat_property(); }));
  out.push_back(guarded("perturbations_flat_ball", [] { return perturbation_property(); }));
  out.push_back(guarded("radial_shell_convergence",
                        [&] { return convergence_property("radial_shell_convergence", radial_shell_convergence(o.resolution)); }));
  out.push_back(guarded("fem_shell_convergence",
                        [] { return convergence_property("fem_shell_convergence", fem_shell_convergence()); }));
  return out;
}

io::Json to_json(const std::vector<Property>& properties) {
  io::Json list = io::Json::array();
  bool all = true;
  for (const auto& p : properties) {
    all = all && p.pass;
    list.push_back(io::Json{{"name", p.name}, {"pass", p.pass}, {"details", p.details}});
  }
  return io::Json{{"all_pass", all}, {"properties", std::move(list)}};
}

}  // namespace qlmass::checks

#include "qlmass/mass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/fillins.hpp"

namespace qlmass {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double brown_york_mass(const AxisymmetricMetric& metric, std::span<const double> mean_curvature) {
  if (mean_curvature.size() != metric.size()) {
    throw Error(Errc::invalid_argument, "Brown-York mass: mean curvature field size mismatch");
  }
  const auto K = gauss_curvature(metric);
  const auto worst = std::min_element(K.begin(), K.end());
  if (!(*worst > 0.0)) {
    std::ostringstream msg;
    msg << "Brown-York mass needs K > 0 (K = " << *worst << " at s = " << metric.s()[static_cast<std::size_t>(worst - K.begin())]
        << ")";
    throw Error(Errc::not_convex, msg.str());
  }
  const auto surface = embed_euclidean(metric);
  std::vector<double> diff(metric.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = surface.mean_curvature[i] - mean_curvature[i];
  return metric.integrate(diff) / (8.0 * kPi);
}

LambdaBracket lambda_bracket(const AxisymmetricMetric& metric, const std::vector<FillinCandidate>& fillins,
                             const std::vector<double>& kappas, const AxisGrid& points) {
  LambdaBracket out;
  for (const auto& cand : fillins) {
    FillinContribution c{cand.label, 0.0, false, {}};
    const auto rep = validate_fillin(cand.domain, metric);
    const std::size_t last = cand.domain.size() - 1;
    c.total_H_over_8pi = cand.domain.h()[last] * cand.domain.dh()[last];
    if (rep.in_F_ring) {
      c.admitted = true;
      if (c.total_H_over_8pi > out.lower) {
        out.lower = c.total_H_over_8pi;
        out.lower_source = cand.label;
      }
    } else {
      std::ostringstream msg;
      msg << "rejected: min R = " << rep.min_R << ", min H = " << rep.min_H_outer
          << ", boundary residual = " << rep.boundary_metric_residual;
      if (rep.has_inner_boundary) msg << ", inner |H| = " << rep.max_abs_H_inner;
      c.reason = msg.str();
    }
    out.fillins.push_back(std::move(c));
  }
  const auto K = gauss_curvature(metric);
  if (*std::min_element(K.begin(), K.end()) > 0.0) {
    const double flat = embed_euclidean(metric).total_mean_curvature() / (8.0 * kPi);
    out.fillins.push_back({"flat Weyl fill-in", flat, true, {}});
    if (flat > out.lower) {
      out.lower = flat;
      out.lower_source = "flat Weyl fill-in";
    }
  }
  out.upper_sweep = minimize_upper_bound(metric, kappas, points);
  out.upper = out.upper_sweep.best.value;
  return out;
}

LambdaBracket lambda_bracket(const AxisymmetricMetric& metric, const std::vector<FillinCandidate>& fillins) {
  return lambda_bracket(metric, fillins, default_kappa_grid(metric), default_axis_grid());
}

MassBracket make_mass_bracket(LambdaBracket lambda, double total_H_over_8pi) {
  if (lambda.lower > lambda.upper) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "bracket inconsistency: lambda_lower = " << lambda.lower << " exceeds lambda_upper = " << lambda.upper;
    throw Error(Errc::internal, msg.str());
  }
  MassBracket out;
  out.lambda_lower = lambda.lower;
  out.lambda_upper = lambda.upper;
  out.total_H_over_8pi = total_H_over_8pi;
  out.raw_mass_lower = lambda.lower - total_H_over_8pi;
  out.mass_lower = std::max(0.0, out.raw_mass_lower);
  out.mass_upper = lambda.upper - total_H_over_8pi;
  out.provenance = std::move(lambda);
  return out;
}

MassBracket variational_mass_bracket(const RadialDomain& domain, std::size_t boundary_nodes,
                                     const std::vector<double>& kappas, const AxisGrid& points) {
  const std::size_t last = domain.size() - 1;
  const double a = domain.h()[last];
  const auto boundary = AxisymmetricMetric::round_sphere(a, boundary_nodes);
  const auto rep = validate_fillin(domain, boundary);
  if (!rep.in_F_ring) {
    std::ostringstream msg;
    msg << "domain is not an admissible fill-in of its boundary (min R = " << rep.min_R
        << ", outer H = " << rep.min_H_outer;
    if (rep.has_inner_boundary) msg << ", inner |H| = " << rep.max_abs_H_inner;
    msg << ")";
    throw Error(Errc::not_admissible, msg.str());
  }
  std::vector<FillinCandidate> set;
  if (domain.has_inner_boundary()) {
    set.push_back({"domain (cap-filled)", cap_fill(domain).domain});
  } else {
    set.push_back({"domain", domain});
  }
  const double total = a * domain.dh()[last];
  return make_mass_bracket(lambda_bracket(boundary, set, kappas, points), total);
}

MassBracket variational_mass_bracket(const RadialDomain& domain, std::size_t boundary_nodes) {
  const double a = domain.h()[domain.size() - 1];
  const auto boundary = AxisymmetricMetric::round_sphere(a, boundary_nodes);
  return variational_mass_bracket(domain, boundary_nodes, default_kappa_grid(boundary), default_axis_grid());
}

CombinedBracket additivity_combine(const std::vector<MassBracket>& components) {
  if (components.empty()) throw Error(Errc::invalid_argument, "additivity: no components");
  CombinedBracket out;
  double lower = 0.0, upper = 0.0, total = 0.0;
  for (std::size_t j = 0; j < components.size(); ++j) {
    const auto& c = components[j];
    if (c.lower_is_empty()) {
      throw Error(Errc::empty_component, "additivity: component " + std::to_string(j) + " has no admissible fill-in");
    }
    lower += c.lambda_lower;
    upper += c.lambda_upper;
    total += c.total_H_over_8pi;
    out.component_consistent.push_back(c.total_H_over_8pi <= c.lambda_upper);
  }
  LambdaBracket combined;
  combined.lower = lower;
  combined.upper = upper;
  combined.lower_source = "sum of components";
  out.total = make_mass_bracket(std::move(combined), total);
  return out;
}

}  // namespace qlmass

#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qlmass/embedding.hpp"
#include "qlmass/geometry.hpp"

namespace qlmass {

// (1/8 pi) int (H0 - H) over a convex sphere; H sampled on the metric's grid.
// NotConvex unless the Gauss curvature is positive everywhere.
double brown_york_mass(const AxisymmetricMetric& metric, std::span<const double> mean_curvature);

// A candidate fill-in for the lower bound.
struct FillinCandidate {
  std::string label;
  RadialDomain domain;
};

// Lower-bound contribution (1/8 pi) int H of one admitted fill-in.
struct FillinContribution {
  std::string label;
  double total_H_over_8pi = 0.0;
  bool admitted = false;
  std::string reason;
};

struct LambdaBracket {
  // -infinity when no fill-in is admitted.
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::string lower_source;
  std::vector<FillinContribution> fillins;
  UpperBoundSweep upper_sweep;

  bool lower_is_empty() const noexcept { return !(lower > -std::numeric_limits<double>::infinity()); }
};

// lower: max over admitted fill-ins (members of the ring class, checked
// against the metric), plus the flat Weyl fill-in when K > 0.
// upper: min of the hyperbolic bound over the kappa x axis grid.
LambdaBracket lambda_bracket(const AxisymmetricMetric& metric, const std::vector<FillinCandidate>& fillins,
                             const std::vector<double>& kappas, const AxisGrid& points);
// Default grids.
LambdaBracket lambda_bracket(const AxisymmetricMetric& metric, const std::vector<FillinCandidate>& fillins = {});

struct MassBracket {
  double lambda_lower = -std::numeric_limits<double>::infinity();
  double lambda_upper = std::numeric_limits<double>::infinity();
  double total_H_over_8pi = 0.0;
  // max(0, raw_mass_lower); raw_mass_lower = lambda_lower - total.
  double mass_lower = 0.0;
  double raw_mass_lower = -std::numeric_limits<double>::infinity();
  double mass_upper = std::numeric_limits<double>::infinity();
  LambdaBracket provenance;

  bool lower_is_empty() const noexcept { return !(lambda_lower > -std::numeric_limits<double>::infinity()); }
};

// Bracket fields from a lambda bracket and the domain's own total. Throws
// Internal if lower > upper.
MassBracket make_mass_bracket(LambdaBracket lambda, double total_H_over_8pi);

// Bracket for a radial domain in the ring class of its round outer sphere.
// The domain itself (cap-filled if it has a minimal inner sphere) joins the
// fill-in set. NotAdmissible otherwise.
MassBracket variational_mass_bracket(const RadialDomain& domain, std::size_t boundary_nodes,
                                     const std::vector<double>& kappas, const AxisGrid& points);
MassBracket variational_mass_bracket(const RadialDomain& domain, std::size_t boundary_nodes = 1024);

struct CombinedBracket {
  MassBracket total;
  // Per component: total_H_over_8pi <= lambda_upper.
  std::vector<bool> component_consistent;
};

// Sums of the component bounds. EmptyComponent if a lower bound is -infinity.
CombinedBracket additivity_combine(const std::vector<MassBracket>& components);

}  // namespace qlmass

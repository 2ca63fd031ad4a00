#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qlmass/geometry.hpp"

namespace qlmass {

// Surface of revolution in R^3 realizing an AxisymmetricMetric. The profile
// curve is (f(s), z(s)); z(0) = 0.
struct RevolutionSurfaceR3 {
  AxisymmetricMetric source;
  std::vector<double> z{};
  std::vector<double> meridian_curvature{};
  std::vector<double> parallel_curvature{};
  std::vector<double> mean_curvature{};
  // max |f'^2 + z'^2 - 1| with z' re-differentiated from the integrated z.
  double isometry_residual = 0.0;

  // Integral of the mean curvature over the surface.
  double total_mean_curvature() const;
};

// Surface of revolution in the hyperboloid model of H^3 with curvature
// -kappa^2. Node i is the orbit (t_i, z_i, f_i cos phi, f_i sin phi) with
// t = a cosh(beta), z = a sinh(beta), a = sqrt(1/kappa^2 + f^2).
struct RevolutionSurfaceH3 {
  AxisymmetricMetric source;
  double kappa = 1.0;
  std::vector<double> beta{};
  std::vector<double> t{};
  std::vector<double> z{};
  std::vector<double> mean_curvature{};
  // kappa^2 |-t^2 + z^2 + f^2 + 1/kappa^2|, maximum over nodes.
  double hyperboloid_residual = 0.0;
  // max |-t'^2 + z'^2 + f'^2 - 1| from differences of the stored coordinates.
  double arclength_residual = 0.0;
  // Difference between beta at full and half resolution at the last node.
  double richardson_error = 0.0;

  double total_mean_curvature() const;
};

// Point (t, x1, x2, x3) of the hyperboloid -t^2 + |x|^2 = -1/kappa^2, t > 0.
// The symmetry axis of every RevolutionSurfaceH3 is x2 = x3 = 0.
struct HyperbolicPoint {
  double t = 1.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  // Axis point with boost parameter beta.
  static HyperbolicPoint on_axis(double kappa, double beta);
  // Point at parameter (beta, rho, phi) of the cylindrical coordinates used by
  // the surfaces of revolution; rho = 0 is the axis.
  static HyperbolicPoint from_cylindrical(double kappa, double beta, double rho, double phi);
  double constraint_residual(double kappa) const;
  bool on_axis_line() const noexcept { return x2 == 0.0 && x3 == 0.0; }
};

// Minkowski product with signature (-, +, +, +).
double minkowski_dot(const HyperbolicPoint& p, const HyperbolicPoint& q);

RevolutionSurfaceR3 embed_euclidean(const AxisymmetricMetric& metric);
RevolutionSurfaceH3 embed_hyperbolic(const AxisymmetricMetric& metric, double kappa);

double hyperbolic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q, double kappa);

// Integral of H0 cosh(kappa r(p, .)) over the surface. Axis points use the
// one-dimensional reduction; other points add a trapezoid rule in the angle.
double cosh_weighted_total(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p);

// Minimum distance from p to the surface, refined between nodes.
double min_distance(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p);

// Whether p lies in the region bounded by the surface.
bool encloses(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p);

// Axis point at a fraction of the surface's beta range; 0.5 is the center.
HyperbolicPoint axis_point(const RevolutionSurfaceH3& surface, double fraction);

struct UpperBound {
  double value = 0.0;
  double kappa = 0.0;
  HyperbolicPoint p;
  std::string p_label;
  double r_star = 0.0;
  double weighted_total = 0.0;
};

UpperBound lambda_upper_bound(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p,
                              std::string p_label = "point");
UpperBound lambda_upper_bound(const AxisymmetricMetric& metric, double kappa,
                              const HyperbolicPoint& p, std::string p_label = "point");

// Base-point choices for the axis grid.
struct AxisGrid {
  std::vector<double> fractions;
  std::vector<std::string> labels;
};
AxisGrid center_only();
// Nine axis points at fractions 0.1 .. 0.9 of the beta range.
AxisGrid default_axis_grid();

// Curvature rule: sqrt(max(0, -min K)) * 1.05 + 0.01.
double minimal_kappa(const AxisymmetricMetric& metric);

// Convex metrics: log-spaced from 1/rho_A down to 1e-3/rho_A, with rho_A the
// area radius. Otherwise: from the curvature rule up to four times it.
std::vector<double> default_kappa_grid(const AxisymmetricMetric& metric, std::size_t count = 16);

struct UpperBoundSweep {
  UpperBound best;
  std::vector<UpperBound> samples;
  // Grid entries that could not be evaluated, with the reason.
  std::vector<std::string> skipped;
};

// Minimum of the bound over kappa x axis grid. Entries whose embedding fails
// are skipped and listed; throws the first failure if every entry fails.
UpperBoundSweep minimize_upper_bound(const AxisymmetricMetric& metric, const std::vector<double>& kappas,
                                     const AxisGrid& points);

}  // namespace qlmass

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qlmass/geometry.hpp"

namespace qlmass {

struct FillinReport {
  double min_R = 0.0;
  double min_H_outer = 0.0;
  // Largest |H| on the inner boundary pieces; 0 when there are none.
  double max_abs_H_inner = 0.0;
  bool has_inner_boundary = false;
  // Mismatch between the outer boundary metric and the target: relative
  // profile residual for radial domains, relative area mismatch for meshes.
  double boundary_metric_residual = 0.0;
  bool boundary_matches = false;
  // R >= 0, H > 0 on the outer boundary, matching boundary metric, no other
  // boundary.
  bool in_F = false;
  // As in_F, but minimal inner boundary components are allowed.
  bool in_F_ring = false;
};

// Reports, never throws on geometric failure. metric_tol bounds the boundary
// metric residual; the other checks use the domain tolerance.
FillinReport validate_fillin(const RadialDomain& domain, const AxisymmetricMetric& target,
                             double metric_tol = 1e-6);
FillinReport validate_fillin(const TetDomain& domain, const AxisymmetricMetric& target,
                             double metric_tol = 5e-2);

struct RandomFillinOptions {
  std::size_t nodes = 256;
  double r_out = 1.0;
  // Lower end of the h'' sampling interval.
  double min_second_derivative = -1.5;
  // h' is kept at or above this value so the outer boundary stays mean-convex.
  double min_slope = 0.05;
  // Fraction of seeds that return the flat ball h = r.
  double flat_fraction = 0.05;
};

// Regular-center radial domain with R >= 0 by construction: a round 3-sphere
// piece near the center followed by exact piecewise-quadratic steps whose h''
// is drawn from [lo, hi], where hi keeps 1 - h'^2 - 2 h h'' >= 0 over the whole
// step and lo keeps h' >= min_slope. Deterministic in the seed.
RadialDomain random_radial_fillin(std::uint64_t seed, const RandomFillinOptions& options = {});

struct ShiTamResult {
  double total_H = 0.0;
  double total_H0 = 0.0;
  double gap = 0.0;
  // max |h - (r - r_in)|, the distance from the flat ball profile.
  double flatness = 0.0;
  // gap below the equality threshold.
  bool equality = false;
};

// Round-boundary comparison: int H = 8 pi h h', int H0 = 8 pi h at the outer
// sphere. NotInF unless the domain has a regular center, R >= 0 and H > 0.
ShiTamResult shitam_check(const RadialDomain& domain, double equality_threshold = 1e-6);

struct SchwarzschildBand {
  RadialDomain domain;
  double mass = 0.0;
  double outer_area_radius = 0.0;
  // Nonempty when the band is degenerate (outer sphere close to the horizon).
  std::string warning;
};

// Spatial Schwarzschild of mass m between the horizon (area radius 2m) and
// area radius R_out, on a grid uniform in proper distance.
SchwarzschildBand schwarzschild_band(double mass, double outer_area_radius, std::size_t nodes = 1024);

struct CapFill {
  RadialDomain domain;
  double cap_radius = 0.0;
  double collar_width = 0.0;
  // Outer mean curvature before and after, and the deficit between them.
  double outer_H_before = 0.0;
  double outer_H_after = 0.0;
  double eta = 0.0;
  // Jumps of h'' and R across the seam with the original domain.
  double seam_second_derivative_jump = 0.0;
  double seam_R_jump = 0.0;
};

// Caps a round minimal inner sphere of area radius a with a hemisphere of the
// round 3-sphere of radius a, joined C^1 through an optional cylinder collar
// (h = a) of the given width. Outer nodes are copied unchanged.
CapFill cap_fill(const RadialDomain& domain, double collar_width_fraction = 0.25);

}  // namespace qlmass

#pragma once

#include <optional>
#include <string>

#include "qlmass/geometry.hpp"

namespace qlmass::presets {

// A boundary sphere metric, optionally with a radial domain bounding it.
struct Preset {
  std::string name;
  AxisymmetricMetric boundary;
  std::optional<RadialDomain> domain;
  // Gauss curvature positive, so Brown-York applies.
  bool convex = true;
};

// Flat ball of radius rho.
Preset round(double rho = 1.0, std::size_t nodes = 1024);
// Spatial Schwarzschild band from the horizon out to area radius R.
Preset schwarzschild(double mass = 1.0, double outer_area_radius = 3.0, std::size_t nodes = 1024);
// Geodesic ball of radius r0 < pi/2 in the unit 3-sphere.
Preset cap(double r0 = 1.0, std::size_t nodes = 1024);
// f = sin s (1 - depth sin^2 s); negative Gauss curvature at the neck.
// Boundary metric only.
Preset dumbbell(double depth = 0.5, std::size_t nodes = 1024);

// "name" or "name:a,b" with the positional parameters above.
Preset by_name(const std::string& spec, std::size_t nodes = 1024);

}  // namespace qlmass::presets

#include "qlmass/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "qlmass/error.hpp"
#include "qlmass/fillins.hpp"

namespace qlmass::presets {

namespace {

std::vector<double> grid(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  x.back() = b;
  return x;
}

}  // namespace

Preset round(double rho, std::size_t nodes) {
  if (!(rho > 0.0)) throw Error(Errc::invalid_argument, "round preset: radius must be positive");
  auto r = grid(0.0, rho, nodes);
  std::vector<double> h = r, dh(nodes, 1.0), d2h(nodes, 0.0);
  auto domain = RadialDomain::from_profile(std::move(r), std::move(h), std::move(dh), std::move(d2h),
                                           InnerRole::regular_center);
  return {"round", AxisymmetricMetric::round_sphere(rho, nodes), std::move(domain), true};
}

Preset schwarzschild(double mass, double outer_area_radius, std::size_t nodes) {
  auto band = schwarzschild_band(mass, outer_area_radius, nodes);
  return {"schwarzschild", AxisymmetricMetric::round_sphere(outer_area_radius, nodes), std::move(band.domain),
          true};
}

Preset cap(double r0, std::size_t nodes) {
  if (!(r0 > 0.0 && r0 < std::numbers::pi / 2)) {
    throw Error(Errc::invalid_argument, "cap preset: radius must lie in (0, pi/2)");
  }
  auto r = grid(0.0, r0, nodes);
  std::vector<double> h(nodes), dh(nodes), d2h(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    h[i] = std::sin(r[i]);
    dh[i] = std::cos(r[i]);
    d2h[i] = -h[i];
  }
  auto domain = RadialDomain::from_profile(std::move(r), std::move(h), std::move(dh), std::move(d2h),
                                           InnerRole::regular_center);
  return {"cap", AxisymmetricMetric::round_sphere(std::sin(r0), nodes), std::move(domain), true};
}

Preset dumbbell(double depth, std::size_t nodes) {
  if (!(depth >= 0.0 && depth < 1.0)) throw Error(Errc::invalid_argument, "dumbbell preset: depth must lie in [0, 1)");
  auto metric = AxisymmetricMetric::from_function(
      [depth](double s) {
        const double sn = std::sin(s);
        return sn * (1.0 - depth * sn * sn);
      },
      std::numbers::pi, nodes);
  const auto K = gauss_curvature(metric);
  const bool convex = *std::min_element(K.begin(), K.end()) > 0.0;
  return {"dumbbell", std::move(metric), std::nullopt, convex};
}

Preset by_name(const std::string& spec, std::size_t nodes) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || *end != '\0') throw Error(Errc::invalid_argument, "preset parameter '" + tok + "'");
      args.push_back(v);
    }
  }
  auto arg = [&](std::size_t k, double fallback) { return k < args.size() ? args[k] : fallback; };
  auto expect = [&](std::size_t max) {
    if (args.size() > max) throw Error(Errc::invalid_argument, "too many parameters for preset '" + name + "'");
  };
  if (name == "round") {
    expect(1);
    return round(arg(0, 1.0), nodes);
  }
  if (name == "schwarzschild") {
    expect(2);
    return schwarzschild(arg(0, 1.0), arg(1, 3.0), nodes);
  }
  if (name == "cap") {
    expect(1);
    return cap(arg(0, 1.0), nodes);
  }
  if (name == "dumbbell") {
    expect(1);
    return dumbbell(arg(0, 0.5), nodes);
  }
  throw Error(Errc::invalid_argument, "unknown preset '" + name + "' (round, schwarzschild, cap, dumbbell)");
}

}  // namespace qlmass::presets

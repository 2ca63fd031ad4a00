#include "qlmass/fillins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass {

namespace {

constexpr double kPi = std::numbers::pi;

double grid_tolerance(const RadialDomain& d) {
  const double dr = d.r()[1] - d.r()[0];
  return std::max(d.tolerance(), dr * dr);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

FillinReport validate_fillin(const RadialDomain& domain, const AxisymmetricMetric& target, double metric_tol) {
  FillinReport rep;
  const auto R = radial_scalar_curvature(domain);
  rep.min_R = *std::min_element(R.begin(), R.end());
  rep.min_H_outer = boundary_mean_curvature_radial(domain, Side::outer);
  rep.has_inner_boundary = domain.has_inner_boundary();
  if (rep.has_inner_boundary) rep.max_abs_H_inner = std::abs(boundary_mean_curvature_radial(domain, Side::inner));

  // The outer sphere is round of area radius h_out: compare the target
  // profile with h_out sin(s / h_out).
  const double a = domain.h()[domain.size() - 1];
  const auto s = target.s();
  const auto f = target.f();
  double res = std::abs(target.length() - kPi * a) / a;
  for (std::size_t i = 0; i < target.size(); ++i) {
    res = std::max(res, std::abs(f[i] - a * std::sin(std::min(s[i], kPi * a) / a)) / a);
  }
  rep.boundary_metric_residual = res;
  rep.boundary_matches = res <= metric_tol;

  const double tol = domain.tolerance();
  const bool base = rep.min_R >= -tol && rep.min_H_outer > 0.0 && rep.boundary_matches;
  const bool minimal_inner = !rep.has_inner_boundary || std::abs(domain.dh()[0]) <= grid_tolerance(domain);
  rep.in_F = base && !rep.has_inner_boundary;
  rep.in_F_ring = base && minimal_inner;
  return rep;
}

FillinReport validate_fillin(const TetDomain& domain, const AxisymmetricMetric& target, double metric_tol) {
  FillinReport rep;
  const auto R = domain.tet_scalar_curvature();
  rep.min_R = *std::min_element(R.begin(), R.end());
  const auto H = tet_boundary_mean_curvature(domain);
  rep.min_H_outer = std::numeric_limits<double>::infinity();
  double outer_area = 0.0, inner_H = 0.0, inner_area = 0.0;
  for (std::size_t k = 0; k < H.vertex.size(); ++k) {
    if (H.tag[k] == BoundaryTag::outer) {
      rep.min_H_outer = std::min(rep.min_H_outer, H.mean_curvature[k]);
    } else {
      rep.has_inner_boundary = true;
      inner_H += H.mean_curvature[k] * H.dual_area[k];
      inner_area += H.dual_area[k];
    }
  }
  for (const auto& tri : domain.boundary()) {
    if (tri.tag == BoundaryTag::outer) outer_area += domain.triangle_area(tri.v[0], tri.v[1], tri.v[2]);
  }
  // Discrete vertex curvature is only first-order accurate, so minimality of
  // the inner piece is judged by its area-weighted mean.
  if (inner_area > 0.0) rep.max_abs_H_inner = std::abs(inner_H / inner_area);
  rep.boundary_metric_residual = std::abs(outer_area - target.area()) / target.area();
  rep.boundary_matches = rep.boundary_metric_residual <= metric_tol;
  const double tol = domain.tolerance();
  const bool base = rep.min_R >= -tol && rep.min_H_outer > 0.0 && rep.boundary_matches;
  rep.in_F = base && !rep.has_inner_boundary;
  rep.in_F_ring = base && (!rep.has_inner_boundary || rep.max_abs_H_inner <= metric_tol);
  return rep;
}

RadialDomain random_radial_fillin(std::uint64_t seed, const RandomFillinOptions& opt) {
  if (opt.nodes < 16) throw Error(Errc::invalid_argument, "random fill-in: at least 16 nodes required");
  if (!(opt.r_out > 0.0) || !(opt.min_slope > 0.0 && opt.min_slope < 1.0)) {
    throw Error(Errc::invalid_argument, "random fill-in: need r_out > 0 and 0 < min_slope < 1");
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = opt.nodes;
  const auto r = numerics::linspace(0.0, opt.r_out, n);
  const double dr = r[1] - r[0];
  std::vector<double> h(n), dh(n), d2h(n);
  if (unit(rng) < opt.flat_fraction) {
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = r[i];
      dh[i] = 1.0;
      d2h[i] = 0.0;
    }
    return RadialDomain::from_profile(r, h, dh, d2h, InnerRole::regular_center);
  }

  // Round piece h = sin(sqrt(k) r)/sqrt(k) keeps the center smooth.
  const double k = 2.0 * unit(rng) / (opt.r_out * opt.r_out);
  const auto m = static_cast<std::size_t>(std::ceil((0.05 + 0.45 * unit(rng)) * static_cast<double>(n - 1)));
  const double sk = std::sqrt(k);
  for (std::size_t i = 0; i <= m; ++i) {
    if (k > 0.0) {
      h[i] = std::sin(sk * r[i]) / sk;
      dh[i] = std::cos(sk * r[i]);
      d2h[i] = -k * h[i];
    } else {
      h[i] = r[i];
      dh[i] = 1.0;
      d2h[i] = 0.0;
    }
  }
  // Blocks of steps share one quantile so h'' varies on a coarser scale.
  constexpr std::size_t kBlock = 16;
  double quantile = unit(rng);
  for (std::size_t i = m; i + 1 < n; ++i) {
    if ((i - m) % kBlock == 0) quantile = unit(rng);
    const double b = 2.0 * h[i] + 4.0 * dh[i] * dr;
    const double q = std::max(0.0, 1.0 - dh[i] * dh[i]);
    const double hi = 2.0 * q / (b + std::sqrt(b * b + 8.0 * dr * dr * q));
    const double lo = std::min(hi, std::max(opt.min_second_derivative, (opt.min_slope - dh[i]) / dr));
    const double c = lo + quantile * (hi - lo);
    if (i > m) d2h[i] = c;
    h[i + 1] = h[i] + dh[i] * dr + 0.5 * c * dr * dr;
    dh[i + 1] = dh[i] + c * dr;
    d2h[i + 1] = c;
  }
  return RadialDomain::from_profile(r, h, dh, d2h, InnerRole::regular_center);
}

ShiTamResult shitam_check(const RadialDomain& domain, double equality_threshold) {
  if (domain.inner_role() != InnerRole::regular_center) {
    throw Error(Errc::not_in_f, "fill-in check: domain has an inner boundary");
  }
  const auto R = radial_scalar_curvature(domain);
  const double min_R = *std::min_element(R.begin(), R.end());
  const double H = boundary_mean_curvature_radial(domain, Side::outer);
  if (min_R < -domain.tolerance() || !(H > 0.0)) {
    std::ostringstream msg;
    msg << "fill-in check: not a fill-in (min R = " << min_R << ", H = " << H << ")";
    throw Error(Errc::not_in_f, msg.str());
  }
  const std::size_t n = domain.size();
  const double h = domain.h()[n - 1];
  ShiTamResult out;
  out.total_H = 8.0 * kPi * h * domain.dh()[n - 1];
  out.total_H0 = 8.0 * kPi * h;
  out.gap = out.total_H0 - out.total_H;
  for (std::size_t i = 0; i < n; ++i) {
    out.flatness = std::max(out.flatness, std::abs(domain.h()[i] - (domain.r()[i] - domain.r_in())));
  }
  out.equality = out.gap < equality_threshold;
  return out;
}

SchwarzschildBand schwarzschild_band(double mass, double outer_area_radius, std::size_t nodes) {
  if (!(mass > 0.0) || !(outer_area_radius > 2.0 * mass) || !std::isfinite(outer_area_radius)) {
    std::ostringstream msg;
    msg << "Schwarzschild band: need R_out > 2m > 0 (m = " << mass << ", R_out = " << outer_area_radius << ")";
    throw Error(Errc::invalid_radii, msg.str());
  }
  if (nodes < 16) throw Error(Errc::invalid_argument, "Schwarzschild band: at least 16 nodes required");
  const double m2 = 2.0 * mass;
  // Proper distance from the horizon to area radius rho.
  auto distance = [&](double rho) {
    const double x = std::max(rho - m2, 0.0);
    return std::sqrt(rho * x) + m2 * std::log((std::sqrt(rho) + std::sqrt(x)) / std::sqrt(m2));
  };
  const double length = distance(outer_area_radius);
  const auto r = numerics::linspace(0.0, length, nodes);
  std::vector<double> h(nodes), dh(nodes), d2h(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    double lo = m2, hi = outer_area_radius;
    if (i == 0) {
      hi = m2;
    } else if (i + 1 == nodes) {
      lo = outer_area_radius;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (distance(mid) < r[i] ? lo : hi) = mid;
      }
    }
    const double rho = 0.5 * (lo + hi);
    h[i] = rho;
    dh[i] = std::sqrt(std::max(0.0, 1.0 - m2 / rho));
    d2h[i] = mass / (rho * rho);
  }
  SchwarzschildBand out{RadialDomain::from_profile(r, h, dh, d2h, InnerRole::horizon), mass, outer_area_radius, {}};
  if (outer_area_radius - m2 < 1e-3 * m2) {
    std::ostringstream msg;
    msg << "degenerate band: outer sphere within " << outer_area_radius - m2 << " of the horizon";
    out.warning = msg.str();
  }
  return out;
}

CapFill cap_fill(const RadialDomain& domain, double collar_width_fraction) {
  if (!domain.has_inner_boundary()) throw Error(Errc::not_minimal_inner, "cap fill: domain has no inner boundary");
  if (std::abs(domain.dh()[0]) > grid_tolerance(domain)) {
    std::ostringstream msg;
    msg << "cap fill: inner sphere is not minimal (h' = " << domain.dh()[0] << ")";
    throw Error(Errc::not_minimal_inner, msg.str());
  }
  if (!(collar_width_fraction >= 0.0)) throw Error(Errc::invalid_argument, "cap fill: collar width must be nonnegative");
  const double a = domain.h()[0];
  const double dr = domain.r()[1] - domain.r()[0];
  const double cap_length = 0.5 * kPi * a;
  const double collar = collar_width_fraction * a;
  const auto cap_steps = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(cap_length / dr)));
  const auto collar_steps = collar > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(collar / dr))) : 0;

  std::vector<double> r, h, dh, d2h;
  for (std::size_t i = 0; i < cap_steps; ++i) {
    const double x = cap_length * static_cast<double>(i) / static_cast<double>(cap_steps);
    r.push_back(x);
    h.push_back(a * std::sin(x / a));
    dh.push_back(std::cos(x / a));
    d2h.push_back(-std::sin(x / a) / a);
  }
  for (std::size_t i = 0; i < collar_steps; ++i) {
    r.push_back(cap_length + collar * static_cast<double>(i) / static_cast<double>(collar_steps));
    h.push_back(a);
    dh.push_back(0.0);
    d2h.push_back(i == 0 ? -1.0 / a : 0.0);
  }
  const double shift = cap_length + collar - domain.r_in();
  const double seam_inside = collar_steps > 0 ? 0.0 : -1.0 / a;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    r.push_back(domain.r()[i] + shift);
    h.push_back(domain.h()[i]);
    dh.push_back(domain.dh()[i]);
    d2h.push_back(domain.d2h()[i]);
  }
  const std::size_t seam = cap_steps + collar_steps;
  dh[seam] = 0.0;
  h[seam] = a;

  const double H_before = boundary_mean_curvature_radial(domain, Side::outer);
  auto composite = RadialDomain::from_profile(std::move(r), std::move(h), std::move(dh), std::move(d2h),
                                              InnerRole::regular_center, domain.tolerance());
  const double H_after = boundary_mean_curvature_radial(composite, Side::outer);
  const double d2_outside = domain.d2h()[0];
  const double R_inside = 2.0 * (1.0 - 2.0 * a * seam_inside) / (a * a);
  const double R_outside = 2.0 * (1.0 - 2.0 * a * d2_outside) / (a * a);
  return CapFill{std::move(composite), a,  collar, H_before, H_after, H_before - H_after,
                 d2_outside - seam_inside, R_outside - R_inside};
}

}  // namespace qlmass

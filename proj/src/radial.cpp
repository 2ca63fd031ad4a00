#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/geometry.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass {

std::string to_string(InnerRole role) {
  switch (role) {
    case InnerRole::regular_center: return "regular-center";
    case InnerRole::horizon: return "horizon";
    case InnerRole::cut: return "cut";
  }
  return "cut";
}

InnerRole inner_role_from_string(const std::string& name) {
  if (name == "regular-center" || name == "regular_center" || name == "center") return InnerRole::regular_center;
  if (name == "horizon") return InnerRole::horizon;
  if (name == "cut") return InnerRole::cut;
  throw Error(Errc::invalid_argument, "unknown inner boundary role '" + name + "'");
}

RadialDomain RadialDomain::from_samples(std::vector<double> r, std::vector<double> h, InnerRole role,
                                        double tol) {
  if (r.size() != h.size()) throw Error(Errc::invalid_argument, "radial domain: r and h differ in length");
  if (r.size() < 16) throw Error(Errc::invalid_argument, "radial domain: at least 16 nodes required");
  if (role == InnerRole::regular_center) {
    const double scale = *std::max_element(h.begin(), h.end());
    if (std::abs(h.front()) <= tol * std::max(scale, 1.0)) h.front() = 0.0;
  }
  const auto parity = role == InnerRole::regular_center ? numerics::Parity::odd : numerics::Parity::none;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw Error(Errc::invalid_argument, "radial domain: grid not strictly increasing");
  }
  auto d = numerics::differentiate(r, h, parity, numerics::Parity::none);
  return from_profile(std::move(r), std::move(h), std::move(d.first), std::move(d.second), role, tol);
}

RadialDomain RadialDomain::from_profile(std::vector<double> r, std::vector<double> h,
                                        std::vector<double> dh, std::vector<double> d2h,
                                        InnerRole role, double tol) {
  RadialDomain d;
  d.r_ = std::move(r);
  d.h_ = std::move(h);
  d.dh_ = std::move(dh);
  d.d2h_ = std::move(d2h);
  d.role_ = role;
  d.tol_ = tol;
  d.validate();
  return d;
}

void RadialDomain::validate() {
  const std::size_t n = r_.size();
  if (h_.size() != n || dh_.size() != n || d2h_.size() != n) {
    throw Error(Errc::invalid_argument, "radial domain: field sizes differ");
  }
  if (n < 16) throw Error(Errc::invalid_argument, "radial domain: at least 16 nodes required");
  if (!(tol_ > 0.0)) throw Error(Errc::invalid_argument, "radial domain: tolerance must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(r_[i]) || !std::isfinite(h_[i]) || !std::isfinite(dh_[i]) || !std::isfinite(d2h_[i])) {
      throw Error(Errc::invalid_argument, "radial domain: non-finite sample");
    }
    if (i > 0 && !(r_[i] > r_[i - 1])) throw Error(Errc::invalid_argument, "radial domain: grid not strictly increasing");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(h_[i] > 0.0)) {
      std::ostringstream msg;
      msg << "radial domain: h(" << r_[i] << ") = " << h_[i] << " is not positive";
      throw Error(Errc::nonpositive_interior, msg.str());
    }
  }
  const double dr = r_[1] - r_[0];
  const double grid_tol = std::max(tol_, dr * dr);
  const double scale = *std::max_element(h_.begin(), h_.end());
  switch (role_) {
    case InnerRole::regular_center:
      if (std::abs(h_[0]) > tol_ * std::max(scale, 1.0)) {
        throw Error(Errc::invalid_argument, "radial domain: regular center needs h(r_in) = 0");
      }
      h_[0] = 0.0;
      if (std::abs(dh_[0] - 1.0) > grid_tol) {
        std::ostringstream msg;
        msg << "radial domain: regular center needs h'(r_in) = 1, got " << dh_[0];
        throw Error(Errc::invalid_argument, msg.str());
      }
      break;
    case InnerRole::horizon:
      if (!(h_[0] > 0.0)) throw Error(Errc::nonpositive_interior, "radial domain: horizon needs h(r_in) > 0");
      if (std::abs(dh_[0]) > grid_tol) {
        std::ostringstream msg;
        msg << "radial domain: horizon needs h'(r_in) = 0, got " << dh_[0];
        throw Error(Errc::not_minimal, msg.str());
      }
      break;
    case InnerRole::cut:
      if (!(h_[0] > 0.0)) throw Error(Errc::nonpositive_interior, "radial domain: cut boundary needs h(r_in) > 0");
      break;
  }
}

double RadialDomain::boundary_area(Side side) const {
  const double hb = h_[boundary_index(side)];
  return 4.0 * std::numbers::pi * hb * hb;
}

double RadialDomain::integrate_volume(std::span<const double> field) const {
  if (field.size() != size()) throw Error(Errc::invalid_argument, "integrate_volume: field size mismatch");
  std::vector<double> g(size());
  for (std::size_t i = 0; i < size(); ++i) g[i] = 4.0 * std::numbers::pi * field[i] * h_[i] * h_[i];
  return numerics::integrate(r_, g);
}

RadialDomain RadialDomain::conformally_deformed(std::span<const double> u, const double* du_dnu_inner,
                                                const double* du_dnu_outer) const {
  const std::size_t n = size();
  if (u.size() != n) throw Error(Errc::invalid_argument, "conformal deformation: factor size mismatch");
  for (const double v : u) {
    if (!(v > 0.0)) throw Error(Errc::nonpositive_factor, "conformal deformation: factor must be positive");
  }
  const auto parity = role_ == InnerRole::regular_center ? numerics::Parity::even : numerics::Parity::none;
  auto du = numerics::differentiate(r_, u, parity, numerics::Parity::none);
  if (du_dnu_outer != nullptr) du.first[n - 1] = *du_dnu_outer;
  if (du_dnu_inner != nullptr && has_inner_boundary()) du.first[0] = -*du_dnu_inner;

  std::vector<double> u2(n);
  for (std::size_t i = 0; i < n; ++i) u2[i] = u[i] * u[i];
  auto rr = numerics::cumulative_integral(r_, u2);
  for (auto& v : rr) v += r_in();

  std::vector<double> hh(n), dhh(n), d2hh(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    const double u1 = du.first[i] / ui;
    const double u2r = du.second[i] / ui;
    hh[i] = ui * ui * h_[i];
    dhh[i] = dh_[i] + 2.0 * h_[i] * u1;
    d2hh[i] = (d2h_[i] + 2.0 * dh_[i] * u1 + 2.0 * h_[i] * (u2r - u1 * u1)) / (ui * ui);
  }
  // A horizon stays a horizon only if the factor has no normal derivative there.
  InnerRole role = role_;
  const double dr = r_[1] - r_[0];
  if (role == InnerRole::horizon && std::abs(dhh[0]) > std::max(tol_, dr * dr)) role = InnerRole::cut;
  return from_profile(std::move(rr), std::move(hh), std::move(dhh), std::move(d2hh), role, tol_);
}

std::vector<double> radial_scalar_curvature(const RadialDomain& domain) {
  const auto h = domain.h();
  const auto dh = domain.dh();
  const auto d2h = domain.d2h();
  const std::size_t n = domain.size();
  std::vector<double> R(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] > 0.0) R[i] = 2.0 * (1.0 - dh[i] * dh[i] - 2.0 * h[i] * d2h[i]) / (h[i] * h[i]);
  }
  if (domain.inner_role() == InnerRole::regular_center) {
    R[0] = numerics::extrapolate_even(domain.r().subspan(1, 3), std::span<const double>(R).subspan(1, 3),
                                      domain.r_in());
  }
  return R;
}

double boundary_mean_curvature_radial(const RadialDomain& domain, Side side) {
  if (side == Side::inner && !domain.has_inner_boundary()) {
    throw Error(Errc::invalid_argument, "mean curvature: a regular center is not a boundary");
  }
  const std::size_t i = domain.boundary_index(side);
  const double H = 2.0 * domain.dh()[i] / domain.h()[i];
  return side == Side::outer ? H : -H;
}

}  // namespace qlmass

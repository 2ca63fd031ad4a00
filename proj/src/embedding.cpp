#include "qlmass/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/numerics.hpp"
#include "qlmass/parallel.hpp"

namespace qlmass {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kAngularNodes = 64;

// Fills the pole entries of a curvature field that is even about both poles.
void extrapolate_poles(std::span<const double> s, std::vector<double>& k) {
  const std::size_t n = s.size();
  k.front() = numerics::extrapolate_even(s.subspan(1, 3), std::span<const double>(k).subspan(1, 3), s.front());
  k.back() = numerics::extrapolate_even(s.subspan(n - 4, 3), std::span<const double>(k).subspan(n - 4, 3), s.back());
}

std::string interval_message(std::span<const double> s, std::span<const double> df, double limit,
                             std::size_t first) {
  std::size_t last = first;
  double worst = std::abs(df[first]);
  while (last + 1 < s.size() && std::abs(df[last + 1]) > limit) {
    ++last;
    worst = std::max(worst, std::abs(df[last]));
  }
  std::ostringstream msg;
  msg.precision(6);
  msg << "|f'| exceeds 1 on s in [" << s[first] << ", " << s[last] << "] (max |f'| = " << worst << ")";
  return msg.str();
}

}  // namespace

double RevolutionSurfaceR3::total_mean_curvature() const { return source.integrate(mean_curvature); }

double RevolutionSurfaceH3::total_mean_curvature() const { return source.integrate(mean_curvature); }

HyperbolicPoint HyperbolicPoint::on_axis(double kappa, double beta) {
  return from_cylindrical(kappa, beta, 0.0, 0.0);
}

HyperbolicPoint HyperbolicPoint::from_cylindrical(double kappa, double beta, double rho, double phi) {
  if (!(kappa > 0.0)) throw Error(Errc::invalid_argument, "hyperbolic point: kappa must be positive");
  const double a = std::sqrt(1.0 / (kappa * kappa) + rho * rho);
  return {a * std::cosh(beta), a * std::sinh(beta), rho * std::cos(phi), rho * std::sin(phi)};
}

double HyperbolicPoint::constraint_residual(double kappa) const {
  return std::abs(-t * t + x1 * x1 + x2 * x2 + x3 * x3 + 1.0 / (kappa * kappa)) * kappa * kappa;
}

double minkowski_dot(const HyperbolicPoint& p, const HyperbolicPoint& q) {
  return -p.t * q.t + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3;
}

RevolutionSurfaceR3 embed_euclidean(const AxisymmetricMetric& metric) {
  const auto s = metric.s();
  const auto f = metric.f();
  const auto df = metric.df();
  const auto d2f = metric.d2f();
  const std::size_t n = metric.size();
  const double limit = 1.0 + metric.tolerance();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(df[i]) > limit) throw Error(Errc::not_embeddable, interval_message(s, df, limit, i));
  }
  std::vector<double> dz(n);
  for (std::size_t i = 0; i < n; ++i) dz[i] = std::sqrt(std::max(0.0, 1.0 - df[i] * df[i]));
  dz.front() = 0.0;
  dz.back() = 0.0;

  RevolutionSurfaceR3 out{metric, numerics::cumulative_integral(s, dz), {}, {}, {}, 0.0};
  out.meridian_curvature.assign(n, 0.0);
  out.parallel_curvature.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // f' = cos(psi), z' = sin(psi); the meridian curvature is psi'.
    out.meridian_curvature[i] = -d2f[i] / dz[i];
    out.parallel_curvature[i] = dz[i] / f[i];
  }
  extrapolate_poles(s, out.meridian_curvature);
  extrapolate_poles(s, out.parallel_curvature);
  out.mean_curvature.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mean_curvature[i] = out.meridian_curvature[i] + out.parallel_curvature[i];

  const auto zd = numerics::differentiate(s, out.z, numerics::Parity::even, numerics::Parity::even);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.isometry_residual = std::max(out.isometry_residual, std::abs(df[i] * df[i] + zd.first[i] * zd.first[i] - 1.0));
  }
  return out;
}

RevolutionSurfaceH3 embed_hyperbolic(const AxisymmetricMetric& metric, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(Errc::invalid_argument, "embed_hyperbolic: kappa must be positive");
  const auto s = metric.s();
  const auto f = metric.f();
  const auto df = metric.df();
  const auto d2f = metric.d2f();
  const std::size_t n = metric.size();
  const double k2 = kappa * kappa;
  const double tol = metric.tolerance();

  const auto K = gauss_curvature(metric);
  for (std::size_t i = 0; i < n; ++i) {
    if (K[i] <= -k2) {
      std::ostringstream msg;
      msg << "K = " << K[i] << " <= -kappa^2 = " << -k2 << " at s = " << s[i];
      throw Error(Errc::curvature_bound_violated, msg.str());
    }
  }

  std::vector<double> q(n), sin_psi(n), dbeta(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = std::sqrt(1.0 + k2 * f[i] * f[i]);
    const double c = df[i] / q[i];
    const double rad = 1.0 - c * c;
    if (rad < -tol) {
      std::ostringstream msg;
      msg << "arc-length constraint gives beta'^2 < 0 at s = " << s[i] << " (1 - f'^2/(1 + kappa^2 f^2) = " << rad << ")";
      throw Error(Errc::ode_breakdown, msg.str());
    }
    sin_psi[i] = std::sqrt(std::max(rad, 0.0));
    dbeta[i] = sin_psi[i] * kappa / q[i];
  }
  sin_psi.front() = sin_psi.back() = 0.0;
  dbeta.front() = dbeta.back() = 0.0;

  RevolutionSurfaceH3 out{.source = metric, .kappa = kappa};
  out.beta = numerics::cumulative_integral(s, dbeta);
  {
    // Same quadrature on every other node; compares the end value.
    std::vector<double> sh, bh;
    for (std::size_t i = 0; i < n; i += 2) {
      sh.push_back(s[i]);
      bh.push_back(dbeta[i]);
    }
    const double half = numerics::cumulative_integral(sh, bh).back();
    out.richardson_error = std::abs(half - out.beta[(sh.size() - 1) * 2]);
  }
  out.t.resize(n);
  out.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = q[i] / kappa;
    out.t[i] = a * std::cosh(out.beta[i]);
    out.z[i] = a * std::sinh(out.beta[i]);
    out.hyperboloid_residual = std::max(
        out.hyperboloid_residual, k2 * std::abs(-out.t[i] * out.t[i] + out.z[i] * out.z[i] + f[i] * f[i] + 1.0 / k2));
  }

  std::vector<double> km(n, 0.0), kp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double q3 = q[i] * q[i] * q[i];
    const double dc = d2f[i] / q[i] - k2 * f[i] * df[i] * df[i] / q3;
    km[i] = -dc / sin_psi[i] + k2 * f[i] * sin_psi[i] / q[i];
    kp[i] = q[i] * sin_psi[i] / f[i];
  }
  extrapolate_poles(s, km);
  extrapolate_poles(s, kp);
  out.mean_curvature.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mean_curvature[i] = km[i] + kp[i];

  const auto td = numerics::differentiate(s, out.t, numerics::Parity::even, numerics::Parity::even);
  const auto zd = numerics::differentiate(s, out.z, numerics::Parity::even, numerics::Parity::even);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = -td.first[i] * td.first[i] + zd.first[i] * zd.first[i] + df[i] * df[i] - 1.0;
    out.arclength_residual = std::max(out.arclength_residual, std::abs(r));
  }
  return out;
}

double hyperbolic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q, double kappa) {
  if (!(kappa > 0.0)) throw Error(Errc::invalid_argument, "hyperbolic_distance: kappa must be positive");
  // <P - Q, P - Q> = (4/kappa^2) sinh^2(kappa r / 2); stable for small r.
  const double dt = p.t - q.t, d1 = p.x1 - q.x1, d2 = p.x2 - q.x2, d3 = p.x3 - q.x3;
  const double chord2 = std::max(0.0, -dt * dt + d1 * d1 + d2 * d2 + d3 * d3);
  return 2.0 / kappa * std::asinh(0.5 * kappa * std::sqrt(chord2));
}

namespace {

// cosh(kappa r) between p and the orbit point at node i, angle phi.
double cosh_distance(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p, std::size_t i, double phi) {
  const double k2 = surface.kappa * surface.kappa;
  const double f = surface.source.f()[i];
  const double dot = -p.t * surface.t[i] + p.x1 * surface.z[i] + f * (p.x2 * std::cos(phi) + p.x3 * std::sin(phi));
  return std::max(1.0, -k2 * dot);
}

// Axis points see the whole orbit at one distance.
double cosh_distance_axis(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p, std::size_t i) {
  const double k2 = surface.kappa * surface.kappa;
  return std::max(1.0, k2 * (p.t * surface.t[i] - p.x1 * surface.z[i]));
}

}  // namespace

double cosh_weighted_total(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p) {
  const std::size_t n = surface.source.size();
  std::vector<double> g(n);
  if (p.on_axis_line()) {
    for (std::size_t i = 0; i < n; ++i) g[i] = surface.mean_curvature[i] * cosh_distance_axis(surface, p, i);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < kAngularNodes; ++j) {
        sum += cosh_distance(surface, p, i, 2.0 * kPi * static_cast<double>(j) / kAngularNodes);
      }
      g[i] = surface.mean_curvature[i] * sum / kAngularNodes;
    }
  }
  return surface.source.integrate(g);
}

double min_distance(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p) {
  const std::size_t n = surface.source.size();
  const auto f = surface.source.f();
  const double k2 = surface.kappa * surface.kappa;
  const double rho_p = std::hypot(p.x2, p.x3);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Nearest point of the orbit faces p in angle.
    c[i] = std::max(1.0, k2 * (p.t * surface.t[i] - p.x1 * surface.z[i] - f[i] * rho_p));
  }
  const auto best = numerics::refined_minimum(surface.source.s(), c);
  return std::acosh(std::max(1.0, std::min(best.value, c[best.index]))) / surface.kappa;
}

bool encloses(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p) {
  const double kappa = surface.kappa;
  if (p.constraint_residual(kappa) > 1e-8 * std::max(1.0, kappa * kappa * p.t * p.t)) return false;
  const double rho = std::hypot(p.x2, p.x3);
  const double beta = std::atanh(p.x1 / p.t);
  const auto& b = surface.beta;
  if (!(beta > b.front() && beta < b.back())) return false;
  const auto it = std::lower_bound(b.begin(), b.end(), beta);
  const auto j = static_cast<std::size_t>(it - b.begin());
  const auto f = surface.source.f();
  const double w = (beta - b[j - 1]) / (b[j] - b[j - 1]);
  return rho < (1.0 - w) * f[j - 1] + w * f[j];
}

HyperbolicPoint axis_point(const RevolutionSurfaceH3& surface, double fraction) {
  const double beta = surface.beta.front() + fraction * (surface.beta.back() - surface.beta.front());
  return HyperbolicPoint::on_axis(surface.kappa, beta);
}

UpperBound lambda_upper_bound(const RevolutionSurfaceH3& surface, const HyperbolicPoint& p, std::string p_label) {
  if (!encloses(surface, p)) {
    throw Error(Errc::point_not_enclosed, "base point " + p_label + " is not inside the embedded surface");
  }
  UpperBound out;
  out.kappa = surface.kappa;
  out.p = p;
  out.p_label = std::move(p_label);
  out.weighted_total = cosh_weighted_total(surface, p);
  out.r_star = min_distance(surface, p);
  out.value = out.weighted_total / (8.0 * kPi * std::cosh(surface.kappa * out.r_star));
  return out;
}

UpperBound lambda_upper_bound(const AxisymmetricMetric& metric, double kappa, const HyperbolicPoint& p,
                              std::string p_label) {
  return lambda_upper_bound(embed_hyperbolic(metric, kappa), p, std::move(p_label));
}

AxisGrid center_only() { return {{0.5}, {"center"}}; }

AxisGrid default_axis_grid() {
  AxisGrid g;
  for (int j = 0; j < 9; ++j) {
    g.fractions.push_back(0.1 * (j + 1));
    g.labels.push_back(j == 4 ? std::string("center") : "axis_" + std::to_string(j + 1) + "/10");
  }
  return g;
}

double minimal_kappa(const AxisymmetricMetric& metric) {
  const auto K = gauss_curvature(metric);
  const double min_k = *std::min_element(K.begin(), K.end());
  return std::sqrt(std::max(0.0, -min_k)) * 1.05 + 0.01;
}

std::vector<double> default_kappa_grid(const AxisymmetricMetric& metric, std::size_t count) {
  if (count < 1) throw Error(Errc::invalid_argument, "kappa grid: need at least one value");
  const auto K = gauss_curvature(metric);
  const double min_k = *std::min_element(K.begin(), K.end());
  if (min_k > 0.0) {
    const double area_radius = std::sqrt(metric.area() / (4.0 * kPi));
    if (count == 1) return {1e-3 / area_radius};
    return numerics::logspace(1.0 / area_radius, 1e-3 / area_radius, count);
  }
  const double k0 = minimal_kappa(metric);
  if (count == 1) return {k0};
  return numerics::logspace(k0, 4.0 * k0, count);
}

UpperBoundSweep minimize_upper_bound(const AxisymmetricMetric& metric, const std::vector<double>& kappas,
                                     const AxisGrid& points) {
  if (kappas.empty() || points.fractions.empty()) throw Error(Errc::invalid_argument, "upper bound sweep: empty grid");
  const std::size_t np = points.fractions.size();
  std::vector<std::vector<UpperBound>> per_kappa(kappas.size());
  std::vector<std::string> failure(kappas.size());
  std::vector<Errc> failure_code(kappas.size(), Errc::internal);
  parallel_for(kappas.size(), [&](std::size_t k) {
    try {
      const auto surface = embed_hyperbolic(metric, kappas[k]);
      for (std::size_t j = 0; j < np; ++j) {
        per_kappa[k].push_back(
            lambda_upper_bound(surface, axis_point(surface, points.fractions[j]), points.labels[j]));
      }
    } catch (const Error& e) {
      per_kappa[k].clear();
      failure[k] = e.what();
      failure_code[k] = e.code();
    }
  });
  UpperBoundSweep out;
  for (std::size_t k = 0; k < kappas.size(); ++k) {
    if (per_kappa[k].empty()) {
      std::ostringstream msg;
      msg.precision(15);
      msg << "kappa=" << kappas[k] << ": " << failure[k];
      out.skipped.push_back(msg.str());
    }
    for (auto& b : per_kappa[k]) out.samples.push_back(std::move(b));
  }
  if (out.samples.empty()) {
    throw Error(failure_code.front(), "no admissible (kappa, p) on the grid; " + out.skipped.front());
  }
  out.best = *std::min_element(out.samples.begin(), out.samples.end(),
                               [](const UpperBound& a, const UpperBound& b) { return a.value < b.value; });
  return out;
}

}  // namespace qlmass

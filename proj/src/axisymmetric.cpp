#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/geometry.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass {

namespace {

using numerics::Parity;

}  // namespace

AxisymmetricMetric AxisymmetricMetric::from_samples(std::vector<double> s, std::vector<double> f,
                                                    double tol) {
  if (s.size() != f.size()) throw Error(Errc::invalid_argument, "profile: s and f differ in length");
  if (s.size() < 16) throw Error(Errc::invalid_argument, "profile: at least 16 nodes required");
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "profile: tolerance must be positive");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(f[i])) throw Error(Errc::invalid_argument, "profile: non-finite sample");
    if (i > 0 && !(s[i] > s[i - 1])) throw Error(Errc::invalid_argument, "profile: grid not strictly increasing");
  }
  const double s0 = s.front();
  for (auto& v : s) v -= s0;
  s.front() = 0.0;
  const double length = s.back();
  const double scale = *std::max_element(f.begin(), f.end());
  if (!(scale > 0.0)) throw Error(Errc::nonpositive_interior, "profile: f is not positive anywhere");
  if (std::abs(f.front()) > tol * scale || std::abs(f.back()) > tol * scale) {
    throw Error(Errc::pole_closure_violation, "profile: f must vanish at both poles");
  }
  f.front() = 0.0;
  f.back() = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (!(f[i] > 0.0)) {
      std::ostringstream msg;
      msg << "profile: f(" << s[i] << ") = " << f[i] << " is not positive";
      throw Error(Errc::nonpositive_interior, msg.str());
    }
  }

  AxisymmetricMetric m;
  m.tol_ = tol;
  auto d = numerics::differentiate(s, f, Parity::odd, Parity::odd);
  m.s_ = std::move(s);
  m.f_ = std::move(f);
  m.df_ = std::move(d.first);
  m.d2f_ = std::move(d.second);

  const double ds0 = m.s_[1] - m.s_[0];
  const double ds1 = m.s_.back() - m.s_[m.s_.size() - 2];
  const double start_err = std::abs(m.df_.front() - 1.0);
  const double end_err = std::abs(m.df_.back() + 1.0);
  if (start_err > std::max(tol, ds0 * ds0) || end_err > std::max(tol, ds1 * ds1)) {
    std::ostringstream msg;
    msg << "profile: pole closure requires f'(0) = 1 and f'(L) = -1, got f'(0) = " << m.df_.front()
        << ", f'(L) = " << m.df_.back() << " (L = " << length << ")";
    throw Error(Errc::pole_closure_violation, msg.str());
  }
  return m;
}

AxisymmetricMetric AxisymmetricMetric::from_function(const std::function<double(double)>& profile,
                                                     double length, std::size_t nodes, double tol) {
  if (!(length > 0.0)) throw Error(Errc::invalid_argument, "profile: length must be positive");
  auto s = numerics::linspace(0.0, length, nodes);
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = profile(s[i]);
  f.front() = std::abs(f.front()) <= tol ? 0.0 : f.front();
  f.back() = std::abs(f.back()) <= tol ? 0.0 : f.back();
  return from_samples(std::move(s), std::move(f), tol);
}

AxisymmetricMetric AxisymmetricMetric::round_sphere(double radius, std::size_t nodes) {
  if (!(radius > 0.0)) throw Error(Errc::invalid_argument, "round sphere: radius must be positive");
  auto s = numerics::linspace(0.0, std::numbers::pi * radius, nodes);
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = radius * std::sin(s[i] / radius);
  f.front() = 0.0;
  f.back() = 0.0;
  return from_samples(std::move(s), std::move(f));
}

double AxisymmetricMetric::integrate(std::span<const double> field) const {
  if (field.size() != size()) throw Error(Errc::invalid_argument, "integrate: field size mismatch");
  std::vector<double> g(size());
  for (std::size_t i = 0; i < size(); ++i) g[i] = 2.0 * std::numbers::pi * field[i] * f_[i];
  return numerics::integrate(s_, g);
}

double AxisymmetricMetric::area() const {
  const std::vector<double> one(size(), 1.0);
  return integrate(one);
}

AxisymmetricMetric AxisymmetricMetric::scaled(double c) const {
  if (!(c > 0.0)) throw Error(Errc::invalid_argument, "scaled: factor must be positive");
  AxisymmetricMetric m = *this;
  for (auto& v : m.s_) v *= c;
  for (auto& v : m.f_) v *= c;
  for (auto& v : m.d2f_) v /= c;
  return m;
}

std::vector<double> gauss_curvature(const AxisymmetricMetric& metric) {
  const auto s = metric.s();
  const auto f = metric.f();
  const auto d2f = metric.d2f();
  const std::size_t n = metric.size();
  std::vector<double> K(n);
  for (std::size_t i = 1; i + 1 < n; ++i) K[i] = -d2f[i] / f[i];
  K[0] = numerics::extrapolate_even(s.subspan(1, 3), std::span<const double>(K).subspan(1, 3), s[0]);
  K[n - 1] = numerics::extrapolate_even(s.subspan(n - 4, 3), std::span<const double>(K).subspan(n - 4, 3),
                                        s[n - 1]);
  return K;
}

EigenvalueEstimate first_eigenvalue_conformal(const AxisymmetricMetric& metric) {
  const auto s = metric.s();
  const auto f = metric.f();
  const auto K = gauss_curvature(metric);
  const std::size_t nodes = metric.size();
  const std::size_t cells = nodes - 1;

  // Unknowns at cell centres; fluxes f u' through interior nodes, none at poles.
  std::vector<double> centre(cells), volume(cells), kcell(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    centre[j] = 0.5 * (s[j] + s[j + 1]);
    volume[j] = 0.5 * (f[j] + f[j + 1]) * (s[j + 1] - s[j]);
    kcell[j] = 0.5 * (K[j] + K[j + 1]);
  }
  std::vector<double> diag(cells, 0.0), off(cells - 1, 0.0);
  for (std::size_t j = 0; j + 1 < cells; ++j) {
    const double w = f[j + 1] / (centre[j + 1] - centre[j]);
    diag[j] += w / volume[j];
    diag[j + 1] += w / volume[j + 1];
    off[j] = -w / std::sqrt(volume[j] * volume[j + 1]);
  }
  for (std::size_t j = 0; j < cells; ++j) diag[j] += kcell[j];

  EigenvalueEstimate out;
  out.value = numerics::smallest_eigenvalue_tridiagonal(diag, off);
  return out;
}

}  // namespace qlmass

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qlmass/numerics.hpp"

using namespace qlmass::numerics;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double derivative_error(std::size_t n) {
  const auto x = linspace(0.0, 2.0, n);
  std::vector<double> y(n), dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::exp(x[i]) * std::sin(3.0 * x[i]);
    dy[i] = std::exp(x[i]) * (std::sin(3.0 * x[i]) + 3.0 * std::cos(3.0 * x[i]));
  }
  return max_abs_diff(differentiate(x, y).first, dy);
}

}  // namespace

TEST_CASE("finite differences are fourth order") {
  const double ratio = derivative_error(101) / derivative_error(201);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("odd parity keeps the pole stencil centered") {
  const auto x = linspace(0.0, std::numbers::pi, 129);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]);
  const auto d = differentiate(x, y, Parity::odd, Parity::odd);
  CHECK(d.first.front() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(d.first.back() == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(d.second.front()) < 1e-8);
}

TEST_CASE("fornberg weights reproduce the classical stencil") {
  const std::vector<double> nodes{-1.0, 0.0, 1.0};
  const auto w = fornberg_weights(0.0, nodes, 2);
  CHECK(w[3 + 0] == doctest::Approx(-0.5));
  CHECK(w[3 + 2] == doctest::Approx(0.5));
  CHECK(w[6 + 0] == doctest::Approx(1.0));
  CHECK(w[6 + 1] == doctest::Approx(-2.0));
}

TEST_CASE("gregory quadrature and cumulative integral") {
  const auto x = linspace(0.0, std::numbers::pi, 65);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]);
  const double e65 = std::abs(integrate(x, y) - 2.0);
  CHECK(e65 < 1e-6);
  const auto x2 = linspace(0.0, std::numbers::pi, 129);
  std::vector<double> y2;
  for (double v : x2) y2.push_back(std::sin(v));
  CHECK(e65 / std::abs(integrate(x2, y2) - 2.0) > 12.0);
  const auto c = cumulative_integral(x, y);
  for (std::size_t i = 0; i < x.size(); i += 8) CHECK(c[i] == doctest::Approx(1.0 - std::cos(x[i])).epsilon(1e-7));
}

TEST_CASE("even extrapolation is exact for quadratics in x^2") {
  const std::vector<double> x{0.1, 0.2, 0.3};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 - 3.0 * v * v + v * v * v * v);
  CHECK(extrapolate_even(x, y, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tridiagonal solve and smallest eigenvalue") {
  // -u'' on (0, 1) with Dirichlet ends: eigenvalues (k pi)^2 approx.
  const std::size_t n = 200;
  const double dx = 1.0 / static_cast<double>(n + 1);
  std::vector<double> diag(n, 2.0 / (dx * dx)), off(n - 1, -1.0 / (dx * dx));
  const double lam = smallest_eigenvalue_tridiagonal(diag, off);
  const double exact = 4.0 / (dx * dx) * std::pow(std::sin(std::numbers::pi * dx / 2.0), 2);
  CHECK(lam == doctest::Approx(exact).epsilon(1e-10));

  std::vector<double> lower(n, -1.0), d(n, 4.0), upper(n, -1.0), rhs(n, 1.0);
  const auto u = solve_tridiagonal(lower, d, upper, rhs);
  for (std::size_t i = 1; i + 1 < n; ++i) CHECK(-u[i - 1] + 4.0 * u[i] - u[i + 1] == doctest::Approx(1.0));
}

TEST_CASE("refined minimum of a sampled parabola") {
  const auto x = linspace(0.0, 1.0, 11);
  std::vector<double> y;
  for (double v : x) y.push_back((v - 0.437) * (v - 0.437) + 0.25);
  const auto m = refined_minimum(x, y);
  CHECK(m.x == doctest::Approx(0.437).epsilon(1e-12));
  CHECK(m.value == doctest::Approx(0.25).epsilon(1e-12));
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qlmass/conformal.hpp"
#include "qlmass/error.hpp"
#include "qlmass/fillins.hpp"
#include "qlmass/meshgen.hpp"
#include "qlmass/numerics.hpp"

using namespace qlmass;
using std::numbers::pi;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

RadialDomain flat(double a, double b, std::size_t n, InnerRole role) {
  const auto r = numerics::linspace(a, b, n);
  return RadialDomain::from_profile(r, r, std::vector<double>(n, 1.0), std::vector<double>(n, 0.0), role);
}

RadialDomain sphere_cap(double r0, std::size_t n) {
  const auto r = numerics::linspace(0.0, r0, n);
  std::vector<double> h, dh, d2h;
  for (double x : r) {
    h.push_back(std::sin(x));
    dh.push_back(std::cos(x));
    d2h.push_back(-std::sin(x));
  }
  return RadialDomain::from_profile(r, h, dh, d2h, InnerRole::regular_center);
}

const BoundaryConditions shell_bc{BoundaryCondition::dirichlet(1.0), BoundaryCondition::dirichlet(0.9)};

double shell_error(std::size_t intervals, double* flux = nullptr) {
  const auto d = flat(1.0, 2.0, intervals + 1, InnerRole::cut);
  const auto s = solve_conformal(d, ScalarField::on(d, 0.0), ScalarField::on(d, 0.0), shell_bc);
  double err = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(s.u[i] - (1.1 - 0.2 / d.r()[i])));
  if (flux != nullptr) *flux = s.normal_derivative_at(BoundaryTag::outer);
  return err;
}

}  // namespace

TEST_CASE("radial solver: flat shell harmonic") {
  double flux = 0.0;
  const double e64 = shell_error(64), e128 = shell_error(128), e256 = shell_error(256, &flux);
  CHECK(e64 / e128 >= 3.0);
  CHECK(e128 / e256 >= 3.0);
  CHECK(flux == doctest::Approx(0.05).epsilon(1e-4));
}

TEST_CASE("radial solver: source, Neumann data and potential") {
  SUBCASE("ball with unit sink") {
    const auto d = flat(0.0, 1.0, 257, InnerRole::regular_center);
    BoundaryConditions bc;
    bc.outer = BoundaryCondition::dirichlet(0.0);
    const auto s = solve_conformal(d, ScalarField::on(d, 0.0), ScalarField::on(d, -1.0), bc);
    CHECK(s.u[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
    CHECK(s.normal_derivative_at(BoundaryTag::outer) == doctest::Approx(-1.0 / 3.0).epsilon(1e-6));
  }
  SUBCASE("inner Neumann") {
    const auto d = flat(1.0, 2.0, 257, InnerRole::cut);
    const BoundaryConditions bc{BoundaryCondition::dirichlet(1.0), BoundaryCondition::neumann(0.2)};
    const auto s = solve_conformal(d, ScalarField::on(d, 0.0), ScalarField::on(d, 0.0), bc);
    // u = 0.9 + 0.2 / r.
    CHECK(s.u[0] == doctest::Approx(1.1).epsilon(1e-6));
    CHECK(s.normal_derivative_at(BoundaryTag::horizon) == doctest::Approx(0.2).epsilon(1e-8));
  }
  SUBCASE("constant potential") {
    // Delta u - u = 0 on the unit ball, u = sinh(r) / r.
    const auto d = flat(0.0, 1.0, 513, InnerRole::regular_center);
    BoundaryConditions bc;
    bc.outer = BoundaryCondition::dirichlet(std::sinh(1.0));
    const auto s = solve_conformal(d, ScalarField::on(d, 8.0), ScalarField::on(d, 0.0), bc);
    for (std::size_t i = 1; i < d.size(); i += 64) CHECK(s.u[i] == doctest::Approx(std::sinh(d.r()[i]) / d.r()[i]).epsilon(1e-5));
    CHECK(s.u[0] == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("invalid problems") {
    const auto d = flat(1.0, 2.0, 65, InnerRole::cut);
    const BoundaryConditions pure{BoundaryCondition::neumann(0.0), BoundaryCondition::neumann(0.0)};
    CHECK(code_of([&] { solve_conformal(d, ScalarField::on(d, 0.0), ScalarField::on(d, 0.0), pure); }) ==
          Errc::invalid_argument);
    CHECK(code_of([&] { solve_conformal(d, ScalarField::on(d, -1.0), ScalarField::on(d, 0.0), shell_bc); }) ==
          Errc::invalid_argument);
    CHECK(code_of([&] { solve_conformal(d, ScalarField(3, 0.0), ScalarField::on(d, 0.0), shell_bc); }) ==
          Errc::invalid_argument);
  }
}

TEST_CASE("FEM solver: flat shell harmonic") {
  std::vector<double> errors;
  double flux = 0.0;
  for (std::size_t level = 0; level < 3; ++level) {
    const auto mesh = meshgen::shell(1.0, 2.0, 4u << level, 2u << level);
    const auto d = meshgen::to_domain(mesh);
    const std::size_t n = d.vertex_count();
    const auto s = solve_conformal(d, ScalarField(n, 0.0), ScalarField(n, 0.0), shell_bc);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = mesh.points[i];
      err = std::max(err, std::abs(s.u[i] - (1.1 - 0.2 / std::hypot(p[0], p[1], p[2]))));
    }
    errors.push_back(err);
    flux = s.normal_derivative_at(BoundaryTag::outer);
    CHECK(s.residual < 1e-9);
  }
  CHECK(errors[0] / errors[1] >= 3.0);
  CHECK(errors[1] / errors[2] >= 3.0);
  CHECK(std::abs(flux - 0.05) < 1e-3);
}

TEST_CASE("FEM solver: potential term and scalar-flat deformation") {
  // R = 0.8: Delta u - 0.1 u = 0, u = 1 on the unit sphere.
  const auto mesh = meshgen::ball(1.0, 8, 8);
  const std::vector<double> tet_R(mesh.tets.size(), 0.8);
  const auto d = meshgen::to_domain(mesh, tet_R);
  const double k = std::sqrt(0.1);
  auto exact = [&](double r) { return r < 1e-12 ? k / std::sinh(k) : std::sinh(k * r) / (r * std::sinh(k)); };
  const auto sf = scalar_flat_deformation(d);
  double err = 0.0;
  for (std::size_t i = 0; i < d.vertex_count(); ++i) {
    const auto& p = mesh.points[i];
    err = std::max(err, std::abs(sf.solve.u[i] - exact(std::hypot(p[0], p[1], p[2]))));
  }
  CHECK(err < 2e-3);
  CHECK(sf.report.boundary_metric_preserved());
  CHECK(sf.solve.positive);
}

TEST_CASE("conformal laws: cap of the 3-sphere made flat") {
  const auto cap = sphere_cap(1.0, 1025);
  const auto sf = scalar_flat_deformation(cap);
  // Stereographic factor normalized to 1 on the boundary.
  for (std::size_t i = 0; i < cap.size(); i += 128) {
    CHECK(sf.solve.u[i] == doctest::Approx(std::cos(0.5) / std::cos(cap.r()[i] / 2.0)).epsilon(1e-6));
  }
  CHECK(sf.total_H_old == doctest::Approx(8.0 * pi * std::sin(1.0) * std::cos(1.0)).epsilon(1e-8));
  CHECK(sf.total_H_new == doctest::Approx(8.0 * pi * std::sin(1.0)).epsilon(1e-5));
  for (double R : sf.report.R_new) CHECK(std::abs(R) < 1e-4);
  CHECK(sf.report.boundary_metric_preserved());
}

TEST_CASE("perturbations of the flat unit ball") {
  const auto ball = flat(0.0, 1.0, 513, InnerRole::regular_center);
  const double eps = 0.1;
  const auto weak = weak_meanconvex_fix(ball, eps);
  // w = (r^2 - 1) / 6, dw/dnu = 1/3.
  CHECK(weak.w.u[0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-8));
  CHECK(weak.min_H_new == doctest::Approx(2.0 + 4.0 * eps / 3.0).epsilon(1e-6));
  CHECK(weak.report.boundary_metric_preserved());

  const auto pos = positivity_perturbation(ball, eps);
  CHECK(pos.min_H_new == doctest::Approx(2.0 - 4.0 * eps / 3.0).epsilon(1e-6));
  // R = (1 + tau w)^-5 8 tau with w = (1 - r^2) / 6.
  for (std::size_t i = 0; i < ball.size(); i += 64) {
    const double w = (1.0 - ball.r()[i] * ball.r()[i]) / 6.0;
    CHECK(pos.report.R_new[i] == doctest::Approx(8.0 * eps / std::pow(1.0 + eps * w, 5)).epsilon(1e-5));
  }
  // w >= -1/6, so eps = 10 drives 1 + eps w below zero.
  CHECK(code_of([&] { weak_meanconvex_fix(ball, 10.0); }) == Errc::nonpositive_factor);
}

TEST_CASE("doubling across the Schwarzschild horizon") {
  const double m = 1.0, R = 3.0;
  const auto band = schwarzschild_band(m, R, 1024).domain;
  for (double eps : {0.2, 0.1, 0.05}) {
    const auto d = doubling_construct(band, eps);
    CHECK(!d.flattening.has_value());
    // phi1 = 1 - eps/2 + (eps/2) sqrt(1 - 2m/rho) / sqrt(1 - 2m/R) with rho = h.
    const double norm = std::sqrt(1.0 - 2.0 * m / R);
    for (std::size_t i = 0; i < band.size(); i += 64) {
      const double rho = band.h()[i];
      const double phi = 1.0 - eps / 2.0 + eps / 2.0 * std::sqrt(std::max(0.0, 1.0 - 2.0 * m / rho)) / norm;
      CHECK(d.phi1.u[i] == doctest::Approx(phi).epsilon(1e-6));
      CHECK(d.phi2[i] == doctest::Approx(2.0 - eps - phi).epsilon(1e-6));
    }
    CHECK(d.horizon_metric_mismatch < 1e-8);
    CHECK(std::abs(d.corner_jump) < 1e-8);
    CHECK(d.outer_margin == doctest::Approx(2.0 * eps * (m / (R * R)) / norm).epsilon(1e-4));
  }
  CHECK(code_of([] { doubling_construct(sphere_cap(1.0, 257), 0.1); }) == Errc::not_minimal);
  CHECK(code_of([] { doubling_construct(flat(1.0, 2.0, 257, InnerRole::cut), 0.1); }) == Errc::not_minimal);
}

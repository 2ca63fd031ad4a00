#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qlmass/embedding.hpp"
#include "qlmass/error.hpp"
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

double simpson(auto&& g, double a, double b, int n = 400) {
  const double h = (b - a) / n;
  double acc = g(a) + g(b);
  for (int i = 1; i < n; ++i) acc += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Oblate spheroid (sin t, c cos t): arc-length profile and the exact total
// mean curvature, both by direct quadrature in the angle.
struct Spheroid {
  double c;
  double speed(double t) const { return std::sqrt(std::cos(t) * std::cos(t) + c * c * std::sin(t) * std::sin(t)); }
  double arclength(double t) const { return simpson([&](double x) { return speed(x); }, 0.0, t); }
  double angle_at(double s) const {
    double t = s;
    for (int it = 0; it < 30; ++it) {
      const double step = (arclength(t) - s) / speed(t);
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return t;
  }
  double total_H() const {
    return 2.0 * pi *
           simpson([&](double t) { return c * std::sin(t) / (speed(t) * speed(t)) + c * std::sin(t); }, 0.0, pi, 4000);
  }
};

double neck(double s) { return std::sin(s) * (1.0 - 0.45 * std::pow(std::sin(s), 2)); }

}  // namespace

TEST_CASE("euclidean embedding of round spheres") {
  for (double r : {1.0, 2.5}) {
    const auto surf = embed_euclidean(AxisymmetricMetric::round_sphere(r, 1024));
    CHECK(surf.total_mean_curvature() == doctest::Approx(8.0 * pi * r).epsilon(1e-8));
    CHECK(surf.isometry_residual < 1e-8);
    const auto s = surf.source.s();
    for (std::size_t i = 0; i < s.size(); i += 97) {
      CHECK(surf.z[i] == doctest::Approx(r * (1.0 - std::cos(s[i] / r))).epsilon(1e-8));
      CHECK(surf.mean_curvature[i] == doctest::Approx(2.0 / r).epsilon(1e-6));
    }
  }
}

TEST_CASE("spheroid round trip") {
  const Spheroid e{0.6};
  const double L = e.arclength(pi);
  const auto s = numerics::linspace(0.0, L, 1024);
  std::vector<double> f;
  for (double x : s) f.push_back(std::sin(e.angle_at(x)));
  f.front() = 0.0;
  f.back() = 0.0;
  const auto surf = embed_euclidean(AxisymmetricMetric::from_samples(s, f));
  CHECK(surf.total_mean_curvature() == doctest::Approx(e.total_H()).epsilon(1e-3));
  CHECK(surf.isometry_residual < 1e-8);
}

TEST_CASE("embedding failures") {
  const auto steep =
      AxisymmetricMetric::from_function([](double s) { return std::sin(s) * (1.0 + 0.2 * std::pow(std::sin(s), 2)); }, pi,
                                        1024);
  CHECK(code_of([&] { embed_euclidean(steep); }) == Errc::not_embeddable);
  try {
    embed_euclidean(steep);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("s in [") != std::string::npos);
  }
  const auto m = AxisymmetricMetric::from_function(neck, pi, 1024);
  CHECK(code_of([&] { embed_hyperbolic(m, 0.1); }) == Errc::curvature_bound_violated);
  CHECK_NOTHROW(embed_hyperbolic(m, 1.0));
}

TEST_CASE("hyperbolic embedding of round spheres") {
  for (double kappa : {1e-3, 0.5, 1.0, 2.0}) {
    for (double rho : {1.0, 2.0}) {
      const auto surf = embed_hyperbolic(AxisymmetricMetric::round_sphere(rho, 1024), kappa);
      // Geodesic sphere with sinh(kappa r0) / kappa = rho: H = 2 kappa coth(kappa r0).
      const double H = 2.0 * std::sqrt(1.0 + kappa * kappa * rho * rho) / rho;
      for (std::size_t i = 0; i < surf.mean_curvature.size(); i += 101) {
        CHECK(surf.mean_curvature[i] == doctest::Approx(H).epsilon(1e-6));
      }
      CHECK(surf.hyperboloid_residual < 1e-8);
      CHECK(surf.arclength_residual < 1e-6);
    }
  }
}

TEST_CASE("hyperbolic distance") {
  const HyperbolicPoint o{1.0, 0.0, 0.0, 0.0};
  const HyperbolicPoint q{std::cosh(1.0), std::sinh(1.0), 0.0, 0.0};
  CHECK(hyperbolic_distance(o, q, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hyperbolic_distance(q, q, 1.0) == 0.0);
  // Geodesic through the base point along a unit tangent direction.
  const double kappa = 2.0;
  const double dir[3] = {0.6, 0.0, 0.8};
  auto exp_map = [&](double r) {
    return HyperbolicPoint{std::cosh(kappa * r) / kappa, dir[0] * std::sinh(kappa * r) / kappa,
                           dir[1] * std::sinh(kappa * r) / kappa, dir[2] * std::sinh(kappa * r) / kappa};
  };
  CHECK(std::abs(hyperbolic_distance(exp_map(0.3), exp_map(0.8), kappa) - 0.5) < 1e-12);
}

TEST_CASE("cosh-weighted total and the upper bound") {
  const auto sphere = AxisymmetricMetric::round_sphere(1.0, 1024);
  const auto surf = embed_hyperbolic(sphere, 1.0);
  const auto center = axis_point(surf, 0.5);
  CHECK(cosh_weighted_total(surf, center) == doctest::Approx(16.0 * pi).epsilon(1e-8));
  CHECK(min_distance(surf, center) == doctest::Approx(std::asinh(1.0)).epsilon(1e-8));
  const auto small = embed_hyperbolic(sphere, 1e-3);
  CHECK(cosh_weighted_total(small, axis_point(small, 0.5)) == doctest::Approx(8.0 * pi).epsilon(1e-3));

  // Off the axis, at the same beta as the center.
  const auto off = HyperbolicPoint::from_cylindrical(1.0, surf.beta[surf.beta.size() / 2], 0.3, 0.7);
  CHECK(encloses(surf, off));
  CHECK(cosh_weighted_total(surf, off) > cosh_weighted_total(surf, center));

  const auto b = lambda_upper_bound(surf, center, "center");
  CHECK(b.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(b.r_star == doctest::Approx(std::asinh(1.0)).epsilon(1e-8));
  CHECK(lambda_upper_bound(sphere, 1e-3, axis_point(small, 0.5), "center").value ==
        doctest::Approx(1.0).epsilon(1e-4));

  const HyperbolicPoint far{std::cosh(5.0), std::sinh(5.0), 0.0, 0.0};
  CHECK(code_of([&] { lambda_upper_bound(surf, far); }) == Errc::point_not_enclosed);
}

TEST_CASE("upper bound sweep is the grid minimum") {
  const auto neck_metric = AxisymmetricMetric::from_function(neck, pi, 512);
  const auto kappas = default_kappa_grid(neck_metric, 6);
  const auto sweep = minimize_upper_bound(neck_metric, kappas, default_axis_grid());
  REQUIRE(!sweep.samples.empty());
  for (const auto& s : sweep.samples) CHECK(sweep.best.value <= s.value);
  for (double k : kappas) CHECK(k > minimal_kappa(neck_metric) * 0.999);

  const auto sphere = AxisymmetricMetric::round_sphere(1.0, 512);
  const auto round_sweep = minimize_upper_bound(sphere, default_kappa_grid(sphere), default_axis_grid());
  for (const auto& s : round_sweep.samples) CHECK(s.value >= 1.0 - 1e-9);
  CHECK(round_sweep.best.value == doctest::Approx(1.0).epsilon(1e-5));
}

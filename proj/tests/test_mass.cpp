#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qlmass/embedding.hpp"
#include "qlmass/error.hpp"
#include "qlmass/fillins.hpp"
#include "qlmass/mass.hpp"
#include "qlmass/numerics.hpp"
#include "qlmass/presets.hpp"

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

double schwarzschild_by(double m, double R) { return R * (1.0 - std::sqrt(1.0 - 2.0 * m / R)); }

double by_on_round(double m, double R, std::size_t nodes) {
  const auto metric = AxisymmetricMetric::round_sphere(R, nodes);
  const std::vector<double> H(metric.size(), 2.0 / R * std::sqrt(1.0 - 2.0 * m / R));
  return brown_york_mass(metric, H);
}

RadialDomain flat_ball(double rho, std::size_t n = 513) {
  const auto r = numerics::linspace(0.0, rho, n);
  return RadialDomain::from_profile(r, r, std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
                                    InnerRole::regular_center);
}

}  // namespace

TEST_CASE("brown-york mass") {
  CHECK(std::abs(by_on_round(0.0, 1.0, 1024)) < 1e-10);
  CHECK(by_on_round(1.0, 3.0, 2048) == doctest::Approx(schwarzschild_by(1.0, 3.0)).epsilon(1e-8));
  double previous = by_on_round(1.0, 3.0, 2048);
  for (double R : {10.0, 100.0, 1000.0}) {
    const double v = by_on_round(1.0, R, 2048);
    CHECK(v == doctest::Approx(schwarzschild_by(1.0, R)).epsilon(1e-8));
    CHECK(v < previous);
    CHECK(v > 1.0);
    previous = v;
  }
  const auto neck = presets::dumbbell(0.5, 512).boundary;
  CHECK(code_of([&] { brown_york_mass(neck, std::vector<double>(neck.size(), 1.0)); }) == Errc::not_convex);
}

TEST_CASE("lambda bracket") {
  const auto sphere = AxisymmetricMetric::round_sphere(1.0, 1024);
  const auto b = lambda_bracket(sphere);
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.upper <= std::sqrt(2.0));
  CHECK(b.upper >= b.lower);
  CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-5));

  const auto coarse = lambda_bracket(sphere, {}, {1.0}, center_only());
  CHECK(coarse.upper == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  const auto neck = presets::dumbbell(0.5, 512).boundary;
  const auto nb = lambda_bracket(neck);
  CHECK(nb.lower_is_empty());
  CHECK(std::isfinite(nb.upper));

  // Schwarzschild bands over a mass grid and the flat ball all fill the round
  // sphere of area radius R; the flat ball wins.
  const double R = 3.0;
  std::vector<FillinCandidate> set;
  for (double m : {0.25, 0.5, 1.0}) set.push_back({"band m=" + std::to_string(m), schwarzschild_band(m, R, 512).domain});
  const auto sb = lambda_bracket(AxisymmetricMetric::round_sphere(R, 1024), set);
  CHECK(sb.lower == doctest::Approx(R).epsilon(1e-8));
  for (const auto& f : sb.fillins) {
    if (f.label.rfind("band", 0) == 0) {
      CHECK(f.admitted);
      CHECK(f.total_H_over_8pi < R);
    }
  }
}

TEST_CASE("variational mass bracket") {
  const auto flat = variational_mass_bracket(flat_ball(1.0));
  CHECK(flat.total_H_over_8pi == doctest::Approx(1.0));
  CHECK(flat.lambda_lower == doctest::Approx(1.0));
  CHECK(flat.mass_lower < 1e-9);

  const auto band = schwarzschild_band(1.0, 3.0, 1024).domain;
  const auto s = variational_mass_bracket(band);
  CHECK(s.total_H_over_8pi == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
  CHECK(s.lambda_lower >= 3.0 - 1e-8);
  CHECK(s.mass_lower >= 3.0 - std::sqrt(3.0) - 1e-8);
  const double by = by_on_round(1.0, 3.0, 1024);
  CHECK(by >= s.mass_lower - 1e-9);
  CHECK(by <= s.mass_upper + 1e-9);

  const auto cap = presets::cap(1.0, 1024).domain.value();
  const auto c = variational_mass_bracket(cap);
  CHECK(c.mass_lower == doctest::Approx(std::sin(1.0) * (1.0 - std::cos(1.0))).epsilon(1e-6));
  CHECK(c.mass_lower > 0.0);

  // Not mean-convex: not admissible.
  const auto r = numerics::linspace(0.0, 2.0, 257);
  std::vector<double> h, dh, d2h;
  for (double x : r) {
    h.push_back(std::sin(x));
    dh.push_back(std::cos(x));
    d2h.push_back(-std::sin(x));
  }
  const auto past = RadialDomain::from_profile(r, h, dh, d2h, InnerRole::regular_center);
  CHECK(code_of([&] { variational_mass_bracket(past); }) == Errc::not_admissible);
}

TEST_CASE("lower bounds strictly exceed the horizon domains' totals") {
  double previous = 0.0;
  for (double m : {0.25, 0.5, 1.0}) {
    const auto b = variational_mass_bracket(schwarzschild_band(m, 3.0, 1024).domain);
    const double margin = b.lambda_lower - b.total_H_over_8pi;
    CHECK(margin == doctest::Approx(3.0 * (1.0 - std::sqrt(1.0 - 2.0 * m / 3.0))).epsilon(1e-6));
    CHECK(margin > previous);
    previous = margin;
  }
}

TEST_CASE("additivity") {
  const auto one = variational_mass_bracket(flat_ball(1.0));
  const auto two = additivity_combine({one, one});
  CHECK(two.total.lambda_lower == doctest::Approx(2.0));
  CHECK(two.total.total_H_over_8pi == doctest::Approx(2.0));
  const auto id = additivity_combine({one});
  CHECK(id.total.lambda_lower == one.lambda_lower);
  CHECK(id.total.lambda_upper == one.lambda_upper);

  const auto big = variational_mass_bracket(flat_ball(2.0));
  const auto sum = additivity_combine({one, big});
  CHECK(sum.total.lambda_lower == doctest::Approx(3.0));
  CHECK(sum.total.lambda_upper == doctest::Approx(one.lambda_upper + big.lambda_upper));
  CHECK(sum.total.lambda_upper >= 3.0);
  CHECK(sum.component_consistent == std::vector<bool>{true, true});

  MassBracket empty;
  CHECK(code_of([&] { additivity_combine({one, empty}); }) == Errc::empty_component);
}

TEST_CASE("bracket ordering is enforced") {
  LambdaBracket bad;
  bad.lower = 2.0;
  bad.upper = 1.0;
  CHECK(code_of([&] { make_mass_bracket(bad, 0.5); }) == Errc::internal);
  LambdaBracket loose;
  loose.lower = 0.2;
  loose.upper = 1.0;
  const auto m = make_mass_bracket(loose, 0.5);
  CHECK(m.mass_lower == 0.0);
  CHECK(m.raw_mass_lower == doctest::Approx(-0.3));
  CHECK(m.mass_upper == doctest::Approx(0.5));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

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

RadialDomain profile(double a, double b, std::size_t n, InnerRole role, double (*h)(double), double (*dh)(double),
                     double (*d2h)(double)) {
  const auto r = numerics::linspace(a, b, n);
  std::vector<double> v, d, dd;
  for (double x : r) {
    v.push_back(h(x));
    d.push_back(dh(x));
    dd.push_back(d2h(x));
  }
  return RadialDomain::from_profile(r, v, d, dd, role);
}

double id(double x) { return x; }
double one(double) { return 1.0; }
double zero(double) { return 0.0; }
double sn(double x) { return std::sin(x); }
double cs(double x) { return std::cos(x); }
double msn(double x) { return -std::sin(x); }
double mcs(double x) { return -std::cos(x); }

}  // namespace

TEST_CASE("validate_fillin") {
  const auto unit = AxisymmetricMetric::round_sphere(1.0, 512);
  const auto ball = profile(0.0, 1.0, 257, InnerRole::regular_center, id, one, zero);
  const auto rb = validate_fillin(ball, unit);
  CHECK(rb.in_F);
  CHECK(rb.in_F_ring);
  CHECK(std::abs(rb.min_R) < 1e-9);
  CHECK(rb.min_H_outer == doctest::Approx(2.0));

  const auto band = schwarzschild_band(1.0, 3.0, 1024).domain;
  const auto rs = validate_fillin(band, AxisymmetricMetric::round_sphere(3.0, 512));
  CHECK(rs.in_F_ring);
  CHECK(!rs.in_F);
  CHECK(rs.has_inner_boundary);

  const auto past = profile(0.0, 2.0, 257, InnerRole::regular_center, sn, cs, msn);
  const auto rp = validate_fillin(past, AxisymmetricMetric::round_sphere(std::sin(2.0), 512));
  CHECK(rp.min_H_outer < 0.0);
  CHECK(!rp.in_F);

  // Wrong target radius.
  CHECK(!validate_fillin(ball, AxisymmetricMetric::round_sphere(1.1, 512)).boundary_matches);

  const auto mesh = meshgen::to_domain(meshgen::ball(1.0, 8, 4));
  const auto rt = validate_fillin(mesh, unit);
  CHECK(rt.in_F);
  CHECK(rt.boundary_metric_residual < 0.05);
}

TEST_CASE("random fill-ins") {
  std::vector<double> slopes;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto d = random_radial_fillin(seed);
    const auto R = radial_scalar_curvature(d);
    CHECK(*std::min_element(R.begin(), R.end()) >= -1e-9);
    CHECK(boundary_mean_curvature_radial(d, Side::outer) > 0.0);
    const auto rep = validate_fillin(d, AxisymmetricMetric::round_sphere(d.h()[d.size() - 1], 256));
    CHECK(rep.in_F);
    slopes.push_back(d.dh()[d.size() - 1]);
  }
  for (double s : slopes) {
    CHECK(s > 0.0);
    CHECK(s <= 1.0 + 1e-12);
  }
  const auto a = random_radial_fillin(42), b = random_radial_fillin(42);
  CHECK(std::equal(a.h().begin(), a.h().end(), b.h().begin(), b.h().end()));
  CHECK(std::equal(a.dh().begin(), a.dh().end(), b.dh().begin(), b.dh().end()));
}

TEST_CASE("shi-tam comparison") {
  const auto ball = profile(0.0, 1.0, 257, InnerRole::regular_center, id, one, zero);
  const auto rb = shitam_check(ball);
  CHECK(rb.total_H == doctest::Approx(8.0 * pi));
  CHECK(rb.total_H0 == doctest::Approx(8.0 * pi));
  CHECK(rb.equality);

  const auto cap = profile(0.0, 1.0, 257, InnerRole::regular_center, sn, cs, msn);
  const auto rc = shitam_check(cap);
  CHECK(rc.total_H == doctest::Approx(8.0 * pi * std::sin(1.0) * std::cos(1.0)));
  CHECK(rc.total_H0 == doctest::Approx(8.0 * pi * std::sin(1.0)));
  CHECK(rc.gap == doctest::Approx(8.0 * pi * std::sin(1.0) * (1.0 - std::cos(1.0))));
  CHECK(!rc.equality);

  const auto band = schwarzschild_band(1.0, 3.0, 512).domain;
  CHECK(code_of([&] { shitam_check(band); }) == Errc::not_in_f);

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto r = shitam_check(random_radial_fillin(seed));
    CHECK(r.gap >= -1e-9);
    if (r.gap < 1e-6) CHECK(r.flatness < 1e-4);
  }
}

TEST_CASE("schwarzschild band") {
  const auto b = schwarzschild_band(1.0, 3.0, 4096);
  const auto R = radial_scalar_curvature(b.domain);
  for (double v : R) CHECK(std::abs(v) < 1e-6);
  const double H = boundary_mean_curvature_radial(b.domain, Side::outer);
  CHECK(H == doctest::Approx(2.0 / 3.0 * std::sqrt(1.0 / 3.0)).epsilon(1e-8));
  CHECK(4.0 * pi * 9.0 * H == doctest::Approx(43.531).epsilon(1e-4));
  CHECK(b.domain.h()[0] == doctest::Approx(2.0));
  CHECK(b.warning.empty());
  // Proper length of the band: sqrt(R(R-2m)) + 2m ln((sqrt R + sqrt(R-2m)) / sqrt(2m)).
  const double L = std::sqrt(3.0) + 2.0 * std::log((std::sqrt(3.0) + 1.0) / std::sqrt(2.0));
  CHECK(b.domain.r_out() - b.domain.r_in() == doctest::Approx(L).epsilon(1e-10));

  const auto thin = schwarzschild_band(1.0, 2.0 + 1e-6, 256);
  CHECK(!thin.warning.empty());
  CHECK(std::abs(boundary_mean_curvature_radial(thin.domain, Side::outer)) < 1e-2);
  CHECK(code_of([] { schwarzschild_band(1.0, 1.5); }) == Errc::invalid_radii);
}

TEST_CASE("cap fill") {
  const auto band = schwarzschild_band(1.0, 3.0, 1024).domain;
  const auto c = cap_fill(band);
  const auto rep = validate_fillin(c.domain, AxisymmetricMetric::round_sphere(3.0, 512));
  CHECK(rep.in_F);
  const auto R = radial_scalar_curvature(c.domain);
  CHECK(*std::min_element(R.begin(), R.end()) >= -1e-9);
  CHECK(c.eta < 0.05);
  CHECK(c.cap_radius == doctest::Approx(2.0));
  const std::size_t n = band.size(), m = c.domain.size();
  for (std::size_t k = 0; k < n; ++k) CHECK(c.domain.h()[m - n + k] == band.h()[k]);

  // Hemisphere band h = cos x on [0, 0.3]: the cap recovers h = sin r.
  const auto hemi = profile(0.0, 0.3, 129, InnerRole::horizon, cs, msn, mcs);
  const auto ch = cap_fill(hemi, 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < ch.domain.size(); ++i) {
    err = std::max(err, std::abs(ch.domain.h()[i] - std::sin(ch.domain.r()[i] - ch.domain.r_in())));
  }
  CHECK(err < 1e-6);
  CHECK(std::abs(ch.seam_second_derivative_jump) < 1e-6);

  const auto shell = profile(1.0, 2.0, 129, InnerRole::cut, id, one, zero);
  CHECK(code_of([&] { cap_fill(shell); }) == Errc::not_minimal_inner);
}

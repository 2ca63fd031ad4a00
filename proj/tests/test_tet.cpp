#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qlmass/error.hpp"
#include "qlmass/geometry.hpp"
#include "qlmass/meshgen.hpp"

using namespace qlmass;

namespace {

std::vector<TetDomain::Edge> all_edges(const std::array<double, 6>& l) {
  return {{0, 1, l[0]}, {0, 2, l[1]}, {0, 3, l[2]}, {1, 2, l[3]}, {1, 3, l[4]}, {2, 3, l[5]}};
}

std::vector<BoundaryTriangle> tet_faces() {
  return {{{1, 2, 3}, BoundaryTag::outer},
          {{0, 2, 3}, BoundaryTag::outer},
          {{0, 1, 3}, BoundaryTag::outer},
          {{0, 1, 2}, BoundaryTag::outer}};
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

}  // namespace

TEST_CASE("cayley-menger volume") {
  // Regular tet of edge a: V = a^3 / (6 sqrt 2), so 288 V^2 = 4 a^6.
  CHECK(cayley_menger_288v2({2, 2, 2, 2, 2, 2}) == doctest::Approx(4.0 * 64.0));
  // Right-corner tet with unit legs: V = 1/6.
  const double d = std::sqrt(2.0);
  CHECK(cayley_menger_288v2({1, 1, 1, d, d, d}) == doctest::Approx(288.0 / 36.0));
  const TetDomain t(4, {{0, 1, 2, 3}}, all_edges({1, 1, 1, d, d, d}), tet_faces());
  CHECK(t.volume(0) == doctest::Approx(1.0 / 6.0));
  CHECK(t.triangle_area(1, 2, 3) == doctest::Approx(std::sqrt(3.0) / 2.0));
  const auto frame = t.local_frame(0);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double dist = std::hypot(frame[i][0] - frame[j][0], frame[i][1] - frame[j][1], frame[i][2] - frame[j][2]);
      CHECK(dist == doctest::Approx(t.edge_length(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
    }
  }
}

TEST_CASE("tet domain validation") {
  // Flat: four coplanar points (unit square).
  const double d = std::sqrt(2.0);
  CHECK(code_of([&] { TetDomain(4, {{0, 1, 2, 3}}, all_edges({1, 1, d, d, 1, 1}), tet_faces()); }) ==
        Errc::non_realizable);
  // Triangle inequality broken on face 0-1-2.
  CHECK(code_of([&] { TetDomain(4, {{0, 1, 2, 3}}, all_edges({1, 1, 1, 3, 1, 1}), tet_faces()); }) ==
        Errc::non_realizable);
  auto open = tet_faces();
  open.pop_back();
  CHECK(code_of([&] { TetDomain(4, {{0, 1, 2, 3}}, all_edges({1, 1, 1, d, d, d}), open); }) ==
        Errc::invalid_argument);
  CHECK(code_of([&] { TetDomain(4, {{0, 1, 2, 4}}, all_edges({1, 1, 1, d, d, d}), tet_faces()); }) ==
        Errc::invalid_argument);
}

TEST_CASE("discrete mean curvature") {
  SUBCASE("single regular tet: equal positive values") {
    const TetDomain t(4, {{0, 1, 2, 3}}, all_edges({1, 1, 1, 1, 1, 1}), tet_faces());
    const auto hc = tet_boundary_mean_curvature(t);
    REQUIRE(hc.mean_curvature.size() == 4);
    CHECK(hc.mean_curvature[0] > 0.0);
    for (double h : hc.mean_curvature) CHECK(h == doctest::Approx(hc.mean_curvature[0]));
  }
  SUBCASE("box: zero on face interiors") {
    const auto mesh = meshgen::box({0, 0, 0}, {1, 1, 1}, 4, 4, 4);
    const auto hc = tet_boundary_mean_curvature(meshgen::to_domain(mesh));
    std::size_t interior = 0;
    for (std::size_t i = 0; i < hc.vertex.size(); ++i) {
      const auto& p = mesh.points[hc.vertex[i]];
      int on_face = 0;
      for (double c : p) on_face += (c == 0.0 || c == 1.0) ? 1 : 0;
      if (on_face == 1) {
        ++interior;
        CHECK(std::abs(hc.mean_curvature[i]) < 1e-12);
      }
    }
    CHECK(interior == 6 * 9);
  }
  SUBCASE("unit ball: mean value within 10% of 2 at about 10k tets") {
    const auto mesh = meshgen::ball(1.0, 8, 8);
    const auto domain = meshgen::to_domain(mesh);
    CHECK(domain.tets().size() > 9000);
    const auto hc = tet_boundary_mean_curvature(domain);
    double sum = 0.0;
    for (double h : hc.mean_curvature) sum += h;
    const double mean = sum / static_cast<double>(hc.mean_curvature.size());
    CHECK(std::abs(mean - 2.0) < 0.2);
    double vol = 0.0;
    for (std::size_t t = 0; t < domain.tets().size(); ++t) vol += domain.volume(t);
    CHECK(vol == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.02));
  }
}

TEST_CASE("shell mesh tags") {
  const auto mesh = meshgen::shell(1.0, 2.0, 4, 2);
  const auto d = meshgen::to_domain(mesh);
  const auto outer = d.boundary_vertices(BoundaryTag::outer);
  const auto inner = d.boundary_vertices(BoundaryTag::horizon);
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    const double r = std::hypot(mesh.points[v][0], mesh.points[v][1], mesh.points[v][2]);
    if (outer[v]) CHECK(r == doctest::Approx(2.0));
    if (inner[v]) CHECK(r == doctest::Approx(1.0));
  }
  CHECK(code_of([] { meshgen::shell(2.0, 1.0, 4, 2); }) == Errc::invalid_radii);
}

#include "qlmass/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_set>

#include "qlmass/error.hpp"

namespace qlmass::meshgen {

namespace {

double norm(const Point3& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

// Unit directions and a triangulation of the sphere.
struct SphereGrid {
  std::vector<Point3> directions;
  std::vector<std::array<std::size_t, 3>> triangles;
};

SphereGrid icosphere(std::size_t m) {
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  const std::array<Point3, 12> base{{{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0},
                                     {0, -1, g}, {0, 1, g}, {0, -1, -g}, {0, 1, -g},
                                     {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}}};
  static constexpr std::size_t kFaces[20][3] = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  SphereGrid grid;
  // A vertex is identified by its integer barycentric weights on the base
  // vertices, so points on shared edges are created once.
  std::map<std::vector<std::pair<std::size_t, std::size_t>>, std::size_t> index;
  for (const auto& face : kFaces) {
    auto vertex = [&](std::size_t i, std::size_t j) {
      const std::size_t w[3] = {m - i - j, i, j};
      std::vector<std::pair<std::size_t, std::size_t>> key;
      Point3 p{};
      for (int c = 0; c < 3; ++c) {
        if (w[c] == 0) continue;
        key.emplace_back(face[c], w[c]);
        for (std::size_t d = 0; d < 3; ++d) p[d] += static_cast<double>(w[c]) * base[face[c]][d];
      }
      std::sort(key.begin(), key.end());
      const auto [it, inserted] = index.try_emplace(key, grid.directions.size());
      if (inserted) {
        const double len = norm(p);
        grid.directions.push_back({p[0] / len, p[1] / len, p[2] / len});
      }
      return it->second;
    };
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; i + j < m; ++j) {
        grid.triangles.push_back({vertex(i, j), vertex(i + 1, j), vertex(i, j + 1)});
        if (i + j + 1 < m) grid.triangles.push_back({vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)});
      }
    }
  }
  return grid;
}

// Three tets of the prism (bottom b0 b1 b2, top t0 t1 t2 above them), split
// by the smallest global index so neighbouring prisms agree on shared faces.
void split_prism(const std::array<std::size_t, 6>& v, std::vector<Tet>& out) {
  static constexpr int kRotation[6][6] = {{0, 1, 2, 3, 4, 5}, {1, 2, 0, 4, 5, 3}, {2, 0, 1, 5, 3, 4},
                                          {3, 5, 4, 0, 2, 1}, {4, 3, 5, 1, 0, 2}, {5, 4, 3, 2, 1, 0}};
  const auto m = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  std::array<std::size_t, 6> p{};
  for (int k = 0; k < 6; ++k) p[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(kRotation[m][k])];
  if (std::min(p[1], p[5]) < std::min(p[2], p[4])) {
    out.push_back({p[0], p[1], p[2], p[5]});
    out.push_back({p[0], p[1], p[5], p[4]});
  } else {
    out.push_back({p[0], p[1], p[2], p[4]});
    out.push_back({p[0], p[4], p[2], p[5]});
  }
  out.push_back({p[0], p[4], p[5], p[3]});
}

TetMesh layered(const std::vector<double>& radii, std::size_t frequency, bool center) {
  if (frequency < 1 || radii.size() < 2 - (center ? 1 : 0)) {
    throw Error(Errc::invalid_argument, "mesh: need a positive frequency and at least one layer");
  }
  const SphereGrid grid = icosphere(frequency);
  const std::size_t ns = grid.directions.size();
  TetMesh mesh;
  const std::size_t offset = center ? 1 : 0;
  if (center) mesh.points.push_back({0.0, 0.0, 0.0});
  for (double r : radii) {
    for (const auto& d : grid.directions) mesh.points.push_back({r * d[0], r * d[1], r * d[2]});
  }
  for (std::size_t l = 0; l + 1 < radii.size(); ++l) {
    for (const auto& t : grid.triangles) {
      const std::size_t lo = offset + l * ns, hi = offset + (l + 1) * ns;
      split_prism({lo + t[0], lo + t[1], lo + t[2], hi + t[0], hi + t[1], hi + t[2]}, mesh.tets);
    }
  }
  if (center) {
    for (const auto& t : grid.triangles) mesh.tets.push_back({0, offset + t[0], offset + t[1], offset + t[2]});
  }
  return mesh;
}

}  // namespace

std::vector<BoundaryTriangle> free_faces(const std::vector<Point3>& points, const std::vector<Tet>& tets,
                                         const std::function<BoundaryTag(const Point3&)>& tag) {
  std::map<std::array<std::size_t, 3>, int> count;
  for (const auto& t : tets) {
    for (int skip = 0; skip < 4; ++skip) {
      std::array<std::size_t, 3> f{};
      int k = 0;
      for (int j = 0; j < 4; ++j) {
        if (j != skip) f[static_cast<std::size_t>(k++)] = t[static_cast<std::size_t>(j)];
      }
      std::sort(f.begin(), f.end());
      ++count[f];
    }
  }
  std::vector<BoundaryTriangle> out;
  for (const auto& [f, c] : count) {
    if (c != 1) continue;
    Point3 centroid{};
    for (const auto v : f) {
      for (int i = 0; i < 3; ++i) centroid[static_cast<std::size_t>(i)] += points[v][static_cast<std::size_t>(i)] / 3.0;
    }
    out.push_back({f, tag(centroid)});
  }
  return out;
}

TetMesh ball(double radius, std::size_t frequency, std::size_t layers) {
  if (!(radius > 0.0) || layers < 1) throw Error(Errc::invalid_argument, "ball mesh: bad radius or layer count");
  std::vector<double> radii;
  for (std::size_t l = 1; l <= layers; ++l) radii.push_back(radius * static_cast<double>(l) / static_cast<double>(layers));
  TetMesh mesh = layered(radii, frequency, true);
  mesh.boundary = free_faces(mesh.points, mesh.tets, [](const Point3&) { return BoundaryTag::outer; });
  return mesh;
}

TetMesh shell(double r_in, double r_out, std::size_t frequency, std::size_t layers, BoundaryTag inner_tag) {
  if (!(r_in > 0.0) || !(r_out > r_in) || layers < 1) throw Error(Errc::invalid_radii, "shell mesh: need 0 < r_in < r_out");
  std::vector<double> radii;
  for (std::size_t l = 0; l <= layers; ++l) {
    radii.push_back(r_in + (r_out - r_in) * static_cast<double>(l) / static_cast<double>(layers));
  }
  TetMesh mesh = layered(radii, frequency, false);
  const double mid = 0.5 * (r_in + r_out);
  mesh.boundary = free_faces(mesh.points, mesh.tets, [mid, inner_tag](const Point3& c) {
    return norm(c) < mid ? inner_tag : BoundaryTag::outer;
  });
  return mesh;
}

TetMesh box(const Point3& lo, const Point3& hi, std::size_t nx, std::size_t ny, std::size_t nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error(Errc::invalid_argument, "box mesh: need at least one cell per axis");
  const std::array<std::size_t, 3> n{nx, ny, nz};
  TetMesh mesh;
  auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  for (std::size_t k = 0; k <= nz; ++k) {
    for (std::size_t j = 0; j <= ny; ++j) {
      for (std::size_t i = 0; i <= nx; ++i) {
        const std::array<std::size_t, 3> ijk{i, j, k};
        Point3 p{};
        for (std::size_t c = 0; c < 3; ++c) {
          p[c] = lo[c] + (hi[c] - lo[c]) * static_cast<double>(ijk[c]) / static_cast<double>(n[c]);
        }
        mesh.points.push_back(p);
      }
    }
  }
  // Kuhn triangulation: one tet per monotone path through the cube.
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> paths;
  do {
    paths.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        for (const auto& path : paths) {
          std::array<std::size_t, 3> c{i, j, k};
          Tet t{};
          t[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[static_cast<std::size_t>(path[static_cast<std::size_t>(s)])];
            t[static_cast<std::size_t>(s + 1)] = id(c[0], c[1], c[2]);
          }
          mesh.tets.push_back(t);
        }
      }
    }
  }
  mesh.boundary = free_faces(mesh.points, mesh.tets, [](const Point3&) { return BoundaryTag::outer; });
  return mesh;
}

TetDomain to_domain(const TetMesh& mesh, std::vector<double> tet_scalar_curvature, double tol) {
  std::vector<TetDomain::Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& t : mesh.tets) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        std::size_t i = t[static_cast<std::size_t>(a)], j = t[static_cast<std::size_t>(b)];
        if (i > j) std::swap(i, j);
        if (!seen.insert((static_cast<std::uint64_t>(i) << 32) | j).second) continue;
        const Point3& p = mesh.points[i];
        const Point3& q = mesh.points[j];
        edges.push_back({i, j, norm({p[0] - q[0], p[1] - q[1], p[2] - q[2]})});
      }
    }
  }
  return TetDomain(mesh.points.size(), mesh.tets, edges, mesh.boundary, std::move(tet_scalar_curvature), tol);
}

}  // namespace qlmass::meshgen

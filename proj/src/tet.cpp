#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "qlmass/error.hpp"
#include "qlmass/geometry.hpp"

namespace qlmass {

namespace {

constexpr std::array<std::array<int, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<int, 3>, 4> kTetFaces{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

struct TriangleHash {
  std::size_t operator()(const std::array<std::size_t, 3>& t) const noexcept {
    std::size_t h = t[0];
    h = h * 1000003u ^ t[1];
    h = h * 1000003u ^ t[2];
    return h;
  }
};

std::array<std::size_t, 3> sorted(std::array<std::size_t, 3> t) {
  std::sort(t.begin(), t.end());
  return t;
}

double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double heron(double a, double b, double c) {
  // Kahan's stable form.
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double x = s[0], y = s[1], z = s[2];
  const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return 0.25 * std::sqrt(std::max(p, 0.0));
}

}  // namespace

double cayley_menger_288v2(const std::array<double, 6>& l) {
  const double d01 = l[0] * l[0], d02 = l[1] * l[1], d03 = l[2] * l[2];
  const double d12 = l[3] * l[3], d13 = l[4] * l[4], d23 = l[5] * l[5];
  double m[5][5] = {{0, 1, 1, 1, 1},
                    {1, 0, d01, d02, d03},
                    {1, d01, 0, d12, d13},
                    {1, d02, d12, 0, d23},
                    {1, d03, d13, d23, 0}};
  double det = 1.0;
  for (int c = 0; c < 5; ++c) {
    int p = c;
    for (int r = c + 1; r < 5; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    if (m[p][c] == 0.0) return 0.0;
    if (p != c) {
      for (int k = 0; k < 5; ++k) std::swap(m[p][k], m[c][k]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 5; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

std::uint64_t TetDomain::key(std::size_t a, std::size_t b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

TetDomain::TetDomain(std::size_t vertex_count, std::vector<Tet> tets, const std::vector<Edge>& edges,
                     std::vector<BoundaryTriangle> boundary, std::vector<double> tet_scalar_curvature,
                     double tol)
    : vertex_count_(vertex_count),
      tets_(std::move(tets)),
      boundary_(std::move(boundary)),
      tet_R_(std::move(tet_scalar_curvature)),
      tol_(tol) {
  if (vertex_count_ >= (std::size_t{1} << 32)) throw Error(Errc::invalid_argument, "tet mesh: too many vertices");
  for (const auto& e : edges) {
    if (e.a >= vertex_count_ || e.b >= vertex_count_ || e.a == e.b) {
      throw Error(Errc::invalid_argument, "tet mesh: edge references an invalid vertex");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw Error(Errc::non_realizable, "tet mesh: edge lengths must be positive");
    }
    lengths_[key(e.a, e.b)] = e.length;
  }
  if (tet_R_.empty()) tet_R_.assign(tets_.size(), 0.0);
  validate();
}

double TetDomain::edge_length(std::size_t a, std::size_t b) const {
  const auto it = lengths_.find(key(a, b));
  if (it == lengths_.end()) {
    std::ostringstream msg;
    msg << "tet mesh: missing length for edge (" << a << ", " << b << ")";
    throw Error(Errc::non_realizable, msg.str());
  }
  return it->second;
}

std::vector<TetDomain::Edge> TetDomain::edges() const {
  std::vector<Edge> out;
  out.reserve(lengths_.size());
  for (const auto& [k, len] : lengths_) {
    out.push_back({static_cast<std::size_t>(k >> 32), static_cast<std::size_t>(k & 0xffffffffu), len});
  }
  std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  return out;
}

void TetDomain::validate() {
  if (tets_.empty()) throw Error(Errc::invalid_argument, "tet mesh: no tetrahedra");
  if (tet_R_.size() != tets_.size()) {
    throw Error(Errc::invalid_argument, "tet mesh: scalar curvature must have one value per tet");
  }
  std::unordered_map<std::array<std::size_t, 3>, int, TriangleHash> face_count;
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    const auto& tet = tets_[t];
    for (int i = 0; i < 4; ++i) {
      if (tet[static_cast<std::size_t>(i)] >= vertex_count_) throw Error(Errc::invalid_argument, "tet mesh: tet references an invalid vertex");
      for (int j = i + 1; j < 4; ++j) {
        if (tet[static_cast<std::size_t>(i)] == tet[static_cast<std::size_t>(j)]) throw Error(Errc::invalid_argument, "tet mesh: degenerate tet");
      }
    }
    std::array<double, 6> l{};
    for (std::size_t e = 0; e < 6; ++e) {
      l[e] = edge_length(tet[static_cast<std::size_t>(kTetEdges[e][0])], tet[static_cast<std::size_t>(kTetEdges[e][1])]);
    }
    for (const auto& f : kTetFaces) {
      const double a = edge_length(tet[static_cast<std::size_t>(f[0])], tet[static_cast<std::size_t>(f[1])]);
      const double b = edge_length(tet[static_cast<std::size_t>(f[1])], tet[static_cast<std::size_t>(f[2])]);
      const double c = edge_length(tet[static_cast<std::size_t>(f[0])], tet[static_cast<std::size_t>(f[2])]);
      if (!(a + b > c && b + c > a && a + c > b)) {
        std::ostringstream msg;
        msg << "tet mesh: tet " << t << " violates a triangle inequality";
        throw Error(Errc::non_realizable, msg.str());
      }
      ++face_count[sorted({tet[static_cast<std::size_t>(f[0])], tet[static_cast<std::size_t>(f[1])], tet[static_cast<std::size_t>(f[2])]})];
    }
    const double scale = *std::max_element(l.begin(), l.end());
    if (!(cayley_menger_288v2(l) > 1e-12 * std::pow(scale, 6))) {
      std::ostringstream msg;
      msg << "tet mesh: tet " << t << " has non-positive Cayley-Menger volume";
      throw Error(Errc::non_realizable, msg.str());
    }
  }
  std::unordered_map<std::array<std::size_t, 3>, int, TriangleHash> listed;
  std::unordered_map<std::uint64_t, int> boundary_edge_count;
  for (const auto& tri : boundary_) {
    const auto s = sorted(tri.v);
    const auto it = face_count.find(s);
    if (it == face_count.end() || it->second != 1) {
      throw Error(Errc::invalid_argument, "tet mesh: boundary triangle is not a free face of the mesh");
    }
    if (++listed[s] > 1) throw Error(Errc::invalid_argument, "tet mesh: duplicated boundary triangle");
    ++boundary_edge_count[key(s[0], s[1])];
    ++boundary_edge_count[key(s[1], s[2])];
    ++boundary_edge_count[key(s[0], s[2])];
  }
  for (const auto& [face, count] : face_count) {
    if (count > 2) throw Error(Errc::invalid_argument, "tet mesh: a face is shared by more than two tets");
    if (count == 1 && !listed.contains(face)) {
      throw Error(Errc::invalid_argument, "tet mesh: free face missing from the tagged boundary");
    }
  }
  for (const auto& [k, count] : boundary_edge_count) {
    if (count != 2) throw Error(Errc::invalid_argument, "tet mesh: boundary is not a closed 2-manifold");
  }
}

std::array<Point3, 4> TetDomain::local_frame(std::size_t t) const {
  const auto& v = tets_[t];
  const double l01 = edge_length(v[0], v[1]), l02 = edge_length(v[0], v[2]), l03 = edge_length(v[0], v[3]);
  const double l12 = edge_length(v[1], v[2]), l13 = edge_length(v[1], v[3]), l23 = edge_length(v[2], v[3]);
  std::array<Point3, 4> p{};
  p[1] = {l01, 0.0, 0.0};
  const double x2 = (l01 * l01 + l02 * l02 - l12 * l12) / (2.0 * l01);
  const double y2 = std::sqrt(std::max(l02 * l02 - x2 * x2, 0.0));
  p[2] = {x2, y2, 0.0};
  const double x3 = (l01 * l01 + l03 * l03 - l13 * l13) / (2.0 * l01);
  const double y3 = (l02 * l02 + l03 * l03 - l23 * l23 - 2.0 * x2 * x3) / (2.0 * y2);
  const double z3 = std::sqrt(std::max(l03 * l03 - x3 * x3 - y3 * y3, 0.0));
  p[3] = {x3, y3, z3};
  return p;
}

double TetDomain::volume(std::size_t t) const {
  const auto p = local_frame(t);
  return std::abs(p[1][0] * p[2][1] * p[3][2]) / 6.0;
}

double TetDomain::triangle_area(std::size_t a, std::size_t b, std::size_t c) const {
  return heron(edge_length(a, b), edge_length(b, c), edge_length(a, c));
}

std::vector<char> TetDomain::boundary_vertices(BoundaryTag tag) const {
  std::vector<char> on(vertex_count_, 0);
  for (const auto& tri : boundary_) {
    if (tri.tag != tag) continue;
    for (const auto v : tri.v) on[v] = 1;
  }
  return on;
}

TetBoundaryCurvature tet_boundary_mean_curvature(const TetDomain& domain) {
  struct EdgeAccum {
    double interior_angle = 0.0;
    double length = 0.0;
  };
  auto edge_key = [](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::unordered_map<std::uint64_t, EdgeAccum> bedges;
  const std::size_t nv = domain.vertex_count();
  std::vector<double> area(nv, 0.0), hsum(nv, 0.0);
  std::vector<int> tag(nv, -1);
  for (const auto& tri : domain.boundary()) {
    const double a = domain.triangle_area(tri.v[0], tri.v[1], tri.v[2]);
    for (int i = 0; i < 3; ++i) {
      const std::size_t v = tri.v[static_cast<std::size_t>(i)];
      area[v] += a / 3.0;
      if (tag[v] < 0) tag[v] = static_cast<int>(tri.tag);
      const std::size_t w = tri.v[static_cast<std::size_t>((i + 1) % 3)];
      bedges[edge_key(v, w)].length = domain.edge_length(v, w);
    }
  }
  const auto tets = domain.tets();
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const auto& tet = tets[t];
    bool frame_ready = false;
    std::array<Point3, 4> p{};
    for (const auto& e : kTetEdges) {
      const auto it = bedges.find(edge_key(tet[static_cast<std::size_t>(e[0])], tet[static_cast<std::size_t>(e[1])]));
      if (it == bedges.end()) continue;
      if (!frame_ready) {
        p = domain.local_frame(t);
        frame_ready = true;
      }
      int others[2];
      int k = 0;
      for (int j = 0; j < 4; ++j) {
        if (j != e[0] && j != e[1]) others[k++] = j;
      }
      const Point3 a = p[static_cast<std::size_t>(e[0])];
      Point3 axis = sub(p[static_cast<std::size_t>(e[1])], a);
      const double len = std::sqrt(dot(axis, axis));
      for (auto& c : axis) c /= len;
      Point3 u = sub(p[static_cast<std::size_t>(others[0])], a);
      Point3 w = sub(p[static_cast<std::size_t>(others[1])], a);
      const double pu = dot(u, axis), pw = dot(w, axis);
      for (int c = 0; c < 3; ++c) {
        u[static_cast<std::size_t>(c)] -= pu * axis[static_cast<std::size_t>(c)];
        w[static_cast<std::size_t>(c)] -= pw * axis[static_cast<std::size_t>(c)];
      }
      const double cosang = dot(u, w) / std::sqrt(dot(u, u) * dot(w, w));
      it->second.interior_angle += std::acos(std::clamp(cosang, -1.0, 1.0));
    }
  }
  for (const auto& [k, acc] : bedges) {
    const double exterior = std::numbers::pi - acc.interior_angle;
    const auto a = static_cast<std::size_t>(k >> 32);
    const auto b = static_cast<std::size_t>(k & 0xffffffffu);
    hsum[a] += 0.5 * acc.length * exterior;
    hsum[b] += 0.5 * acc.length * exterior;
  }
  TetBoundaryCurvature out;
  for (std::size_t v = 0; v < nv; ++v) {
    if (tag[v] < 0) continue;
    out.vertex.push_back(v);
    out.dual_area.push_back(area[v]);
    out.mean_curvature.push_back(hsum[v] / area[v]);
    out.tag.push_back(static_cast<BoundaryTag>(tag[v]));
  }
  return out;
}

}  // namespace qlmass

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qlmass {

// Relative tolerance applied to every validation invariant unless overridden.
inline constexpr double kDefaultTolerance = 1e-6;

// Intrinsic metric ds^2 + f(s)^2 dtheta^2 on a 2-sphere, sampled on an
// arc-length grid s in [0, L] with poles at both ends.
class AxisymmetricMetric {
 public:
  // Validates the samples: at least 16 strictly increasing nodes, f = 0 at the
  // poles, f > 0 inside, and pole closure f'(0) = 1, f'(L) = -1 within
  // max(tol, ds^2) where ds is the end spacing.
  static AxisymmetricMetric from_samples(std::vector<double> s, std::vector<double> f,
                                         double tol = kDefaultTolerance);
  static AxisymmetricMetric from_function(const std::function<double(double)>& profile,
                                          double length, std::size_t nodes,
                                          double tol = kDefaultTolerance);
  static AxisymmetricMetric round_sphere(double radius, std::size_t nodes);

  std::span<const double> s() const noexcept { return s_; }
  std::span<const double> f() const noexcept { return f_; }
  std::span<const double> df() const noexcept { return df_; }
  std::span<const double> d2f() const noexcept { return d2f_; }
  std::size_t size() const noexcept { return s_.size(); }
  double length() const noexcept { return s_.back(); }
  double tolerance() const noexcept { return tol_; }

  // Integral of a nodal field against the area element 2 pi f ds.
  double integrate(std::span<const double> field) const;
  double area() const;

  // Metric c^2 g: grid and profile both scale by c.
  AxisymmetricMetric scaled(double c) const;

 private:
  AxisymmetricMetric() = default;
  std::vector<double> s_, f_, df_, d2f_;
  double tol_ = kDefaultTolerance;
};

// K = -f''/f at interior nodes, poles extrapolated as an even function.
std::vector<double> gauss_curvature(const AxisymmetricMetric& metric);

struct EigenvalueEstimate {
  double value = 0.0;
  // Restricted to axisymmetric functions, so only an indicator for fill-in
  // existence rather than the true first eigenvalue.
  bool heuristic = true;
  std::string label = "heuristic fill-in existence indicator";
};

// Smallest eigenvalue of -Laplacian + K on axisymmetric functions, using a
// cell-centred finite-volume discretisation of -(1/f)(f u')' + K u.
EigenvalueEstimate first_eigenvalue_conformal(const AxisymmetricMetric& metric);

enum class InnerRole { regular_center, horizon, cut };
enum class Side { inner, outer };

std::string to_string(InnerRole role);
InnerRole inner_role_from_string(const std::string& name);

// Rotationally symmetric 3-manifold dr^2 + h(r)^2 g_{S^2} on [r_in, r_out].
// Carries h and its first two derivatives at every node; derivatives come
// either from the caller (exact profiles) or from fourth-order differences.
class RadialDomain {
 public:
  static RadialDomain from_samples(std::vector<double> r, std::vector<double> h, InnerRole role,
                                   double tol = kDefaultTolerance);
  static RadialDomain from_profile(std::vector<double> r, std::vector<double> h,
                                   std::vector<double> dh, std::vector<double> d2h,
                                   InnerRole role, double tol = kDefaultTolerance);

  std::span<const double> r() const noexcept { return r_; }
  std::span<const double> h() const noexcept { return h_; }
  std::span<const double> dh() const noexcept { return dh_; }
  std::span<const double> d2h() const noexcept { return d2h_; }
  std::size_t size() const noexcept { return r_.size(); }
  InnerRole inner_role() const noexcept { return role_; }
  double tolerance() const noexcept { return tol_; }
  double r_in() const noexcept { return r_.front(); }
  double r_out() const noexcept { return r_.back(); }
  bool has_inner_boundary() const noexcept { return role_ != InnerRole::regular_center; }

  std::size_t boundary_index(Side side) const noexcept { return side == Side::inner ? 0 : size() - 1; }
  double boundary_area(Side side) const;

  // Integral of a nodal field against the volume element 4 pi h^2 dr.
  double integrate_volume(std::span<const double> field) const;

  // Metric u^4 g written again as a warped product: new radius coordinate
  // int u^2 dr and warping u^2 h. Optional outward normal derivatives of u
  // replace the finite-difference value of u' at the boundary nodes.
  RadialDomain conformally_deformed(std::span<const double> u,
                                    const double* du_dnu_inner = nullptr,
                                    const double* du_dnu_outer = nullptr) const;

 private:
  RadialDomain() = default;
  void validate();
  std::vector<double> r_, h_, dh_, d2h_;
  InnerRole role_ = InnerRole::regular_center;
  double tol_ = kDefaultTolerance;
};

// R = 2 (1 - h'^2 - 2 h h'') / h^2; a regular center is extrapolated.
std::vector<double> radial_scalar_curvature(const RadialDomain& domain);

// Mean curvature 2 h'/h with respect to the outward normal (sign flipped at
// the inner boundary). Sum-of-principal-curvatures convention.
double boundary_mean_curvature_radial(const RadialDomain& domain, Side side);

// Sigma_O and Sigma_H.
enum class BoundaryTag { outer, horizon };

struct BoundaryTriangle {
  std::array<std::size_t, 3> v;
  BoundaryTag tag;
};

using Tet = std::array<std::size_t, 4>;
using Point3 = std::array<double, 3>;

// Tetrahedral 3-mesh whose metric is given purely by edge lengths.
class TetDomain {
 public:
  struct Edge {
    std::size_t a;
    std::size_t b;
    double length;
  };

  TetDomain(std::size_t vertex_count, std::vector<Tet> tets, const std::vector<Edge>& edges,
            std::vector<BoundaryTriangle> boundary, std::vector<double> tet_scalar_curvature = {},
            double tol = kDefaultTolerance);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::span<const Tet> tets() const noexcept { return tets_; }
  std::span<const BoundaryTriangle> boundary() const noexcept { return boundary_; }
  std::span<const double> tet_scalar_curvature() const noexcept { return tet_R_; }
  double tolerance() const noexcept { return tol_; }

  double edge_length(std::size_t a, std::size_t b) const;
  std::vector<Edge> edges() const;

  // Isometric placement of one tetrahedron in R^3 from its six edge lengths;
  // vertex 0 at the origin, vertex 1 on the x axis, vertex 2 in the xy plane.
  std::array<Point3, 4> local_frame(std::size_t tet) const;
  double volume(std::size_t tet) const;
  double triangle_area(std::size_t a, std::size_t b, std::size_t c) const;

  // Per-vertex flags: whether the vertex lies on a boundary triangle with tag.
  std::vector<char> boundary_vertices(BoundaryTag tag) const;

 private:
  static std::uint64_t key(std::size_t a, std::size_t b) noexcept;
  void validate();

  std::size_t vertex_count_ = 0;
  std::vector<Tet> tets_;
  std::unordered_map<std::uint64_t, double> lengths_;
  std::vector<BoundaryTriangle> boundary_;
  std::vector<double> tet_R_;
  double tol_ = kDefaultTolerance;
};

// Squared volume times 288 from the Cayley-Menger determinant of six lengths
// l01, l02, l03, l12, l13, l23.
double cayley_menger_288v2(const std::array<double, 6>& lengths);

struct TetBoundaryCurvature {
  std::vector<std::size_t> vertex;
  std::vector<double> mean_curvature;
  std::vector<double> dual_area;
  std::vector<BoundaryTag> tag;
};

// Discrete mean curvature at boundary vertices: half the sum of |e| times the
// exterior dihedral angle over incident boundary edges, divided by a third of
// the incident boundary triangle area. First-order consistent.
TetBoundaryCurvature tet_boundary_mean_curvature(const TetDomain& domain);

// Nodal values on a RadialDomain or TetDomain.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::vector<double> values) : values_(std::move(values)) {}
  ScalarField(std::size_t n, double value) : values_(n, value) {}

  static ScalarField on(const RadialDomain& d, double value) { return ScalarField(d.size(), value); }
  static ScalarField on(const TetDomain& d, double value) { return ScalarField(d.vertex_count(), value); }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool matches(const RadialDomain& d) const noexcept { return size() == d.size(); }
  bool matches(const TetDomain& d) const noexcept { return size() == d.vertex_count(); }

 private:
  std::vector<double> values_;
};

}  // namespace qlmass

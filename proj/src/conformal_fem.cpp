#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlmass/conformal.hpp"
#include "qlmass/error.hpp"

namespace qlmass {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Stiffness matrix, lumped volumes, lumped R/8 potential and lumped boundary
// areas of a tet domain.
struct Assembly {
  SparseMatrix stiffness;
  std::vector<double> mass;
  std::vector<double> potential;
  std::vector<double> boundary_area;
  std::vector<int> boundary_tag;  // -1 interior
};

Assembly assemble(const TetDomain& domain, const ScalarField& R) {
  const std::size_t n = domain.vertex_count();
  const auto tets = domain.tets();
  Assembly a;
  a.mass.assign(n, 0.0);
  a.potential.assign(n, 0.0);
  a.boundary_area.assign(n, 0.0);
  a.boundary_tag.assign(n, -1);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(tets.size() * 16);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const auto p = domain.local_frame(t);
    Eigen::Matrix3d J;
    for (int k = 0; k < 3; ++k) {
      for (int c = 0; c < 3; ++c) J(c, k) = p[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(c)] - p[0][static_cast<std::size_t>(c)];
    }
    const double vol = std::abs(J.determinant()) / 6.0;
    const Eigen::Matrix3d Jinv = J.inverse();
    Eigen::Matrix<double, 3, 4> grad;
    for (int k = 0; k < 3; ++k) grad.col(k + 1) = Jinv.row(k).transpose();
    grad.col(0) = -(grad.col(1) + grad.col(2) + grad.col(3));
    double rbar = 0.0;
    for (const auto v : tets[t]) rbar += R[v] / 4.0;
    for (int i = 0; i < 4; ++i) {
      const auto vi = tets[t][static_cast<std::size_t>(i)];
      a.mass[vi] += vol / 4.0;
      a.potential[vi] += vol / 4.0 * rbar / 8.0;
      for (int j = 0; j < 4; ++j) {
        trip.emplace_back(static_cast<int>(vi), static_cast<int>(tets[t][static_cast<std::size_t>(j)]),
                          vol * grad.col(i).dot(grad.col(j)));
      }
    }
  }
  a.stiffness.resize(static_cast<int>(n), static_cast<int>(n));
  a.stiffness.setFromTriplets(trip.begin(), trip.end());
  for (const auto& tri : domain.boundary()) {
    const double area = domain.triangle_area(tri.v[0], tri.v[1], tri.v[2]);
    for (const auto v : tri.v) {
      a.boundary_area[v] += area / 3.0;
      if (a.boundary_tag[v] < 0 || tri.tag == BoundaryTag::outer) a.boundary_tag[v] = static_cast<int>(tri.tag);
    }
  }
  return a;
}

// (K + potential) u at every node.
std::vector<double> apply_operator(const Assembly& a, std::span<const double> u) {
  const Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
  const Eigen::VectorXd ku = a.stiffness * uv;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = ku[static_cast<Eigen::Index>(i)] + a.potential[i] * u[i];
  return out;
}

const BoundaryCondition& condition_for(int tag, const BoundaryConditions& bc) {
  return tag == static_cast<int>(BoundaryTag::outer) ? bc.outer : bc.inner;
}

}  // namespace

ScalarField vertex_scalar_curvature(const TetDomain& domain) {
  const std::size_t n = domain.vertex_count();
  std::vector<double> sum(n, 0.0), weight(n, 0.0);
  const auto tets = domain.tets();
  const auto R = domain.tet_scalar_curvature();
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const double v = domain.volume(t);
    for (const auto i : tets[t]) {
      sum[i] += v * R[t];
      weight[i] += v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) sum[i] = weight[i] > 0.0 ? sum[i] / weight[i] : 0.0;
  return ScalarField(std::move(sum));
}

ConformalSolve solve_conformal(const TetDomain& domain, const ScalarField& scalar_curvature, const ScalarField& rhs,
                               const BoundaryConditions& bc) {
  const std::size_t n = domain.vertex_count();
  if (!scalar_curvature.matches(domain) || !rhs.matches(domain)) {
    throw Error(Errc::invalid_argument, "conformal solve: field size does not match the mesh");
  }
  const auto Rv = scalar_curvature.values();
  const double lo = *std::min_element(Rv.begin(), Rv.end());
  const double hi = *std::max_element(Rv.begin(), Rv.end());
  if (lo < -domain.tolerance()) {
    std::ostringstream msg;
    msg << "conformal solve: requires R >= 0 (min R = " << lo << ")";
    throw Error(Errc::invalid_argument, msg.str());
  }
  const Assembly a = assemble(domain, scalar_curvature);

  std::vector<double> u(n, 0.0);
  std::vector<int> free_index(n, -1);
  int nfree = 0;
  bool has_dirichlet = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int tag = a.boundary_tag[i];
    if (tag >= 0 && condition_for(tag, bc).kind == BoundaryKind::dirichlet) {
      u[i] = condition_for(tag, bc).value;
      has_dirichlet = true;
    } else {
      free_index[i] = nfree++;
    }
  }
  if (!has_dirichlet && hi <= domain.tolerance()) {
    throw Error(Errc::invalid_argument,
                "conformal solve: pure Neumann problem with R = 0 is singular; add a Dirichlet piece");
  }

  // Weak form: (K + M R/8) u = -M rhs + B g.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nfree);
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < a.stiffness.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a.stiffness, k); it; ++it) {
      const auto row = static_cast<std::size_t>(it.row()), col = static_cast<std::size_t>(it.col());
      if (free_index[row] < 0) continue;
      if (free_index[col] < 0) {
        b[free_index[row]] -= it.value() * u[col];
      } else {
        trip.emplace_back(free_index[row], free_index[col], it.value());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int f = free_index[i];
    if (f < 0) continue;
    trip.emplace_back(f, f, a.potential[i]);
    b[f] -= a.mass[i] * rhs[i];
    if (a.boundary_tag[i] >= 0) b[f] += a.boundary_area[i] * condition_for(a.boundary_tag[i], bc).value;
  }

  ConformalSolve out;
  if (nfree > 0) {
    SparseMatrix A(nfree, nfree);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(1e-10);
    cg.setMaxIterations(std::max(1000, 20 * nfree));
    cg.compute(A);
    const Eigen::VectorXd x = cg.solve(b);
    if (cg.info() != Eigen::Success || !x.allFinite()) {
      std::ostringstream msg;
      msg << "conjugate gradients did not converge (" << cg.iterations() << " iterations, error " << cg.error() << ")";
      throw Error(Errc::solver_divergence, msg.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (free_index[i] >= 0) u[i] = x[free_index[i]];
    }
    const double bn = b.norm();
    out.residual = (A * x - b).norm() / (bn > 0.0 ? bn : 1.0);
    out.iterations = static_cast<std::size_t>(cg.iterations());
  }

  // Flux recovery: the residual of the full system at a boundary node is the
  // lumped boundary flux.
  const auto Au = apply_operator(a, u);
  for (std::size_t i = 0; i < n; ++i) {
    const int tag = a.boundary_tag[i];
    if (tag < 0) continue;
    const auto& cond = condition_for(tag, bc);
    const double g = cond.kind == BoundaryKind::neumann ? cond.value : (Au[i] + a.mass[i] * rhs[i]) / a.boundary_area[i];
    out.boundary_nodes.push_back(i);
    out.boundary_tags.push_back(static_cast<BoundaryTag>(tag));
    out.normal_derivative.push_back(g);
    out.boundary_weights.push_back(a.boundary_area[i]);
  }
  out.u = ScalarField(std::move(u));
  out.min_u = *std::min_element(out.u.values().begin(), out.u.values().end());
  out.max_u = *std::max_element(out.u.values().begin(), out.u.values().end());
  out.positive = out.min_u > 0.0;
  return out;
}

DeformedBoundaryReport conformal_laws(const TetDomain& domain, const ConformalSolve& solve) {
  const std::size_t n = domain.vertex_count();
  if (!solve.u.matches(domain)) throw Error(Errc::invalid_argument, "conformal laws: factor size mismatch");
  const auto u = solve.u.values();
  for (const double v : u) {
    if (!(v > 0.0)) throw Error(Errc::nonpositive_factor, "conformal laws: factor must be positive");
  }
  const ScalarField R = vertex_scalar_curvature(domain);
  const Assembly a = assemble(domain, ScalarField(n, 0.0));
  auto lap = apply_operator(a, u);
  for (auto& v : lap) v = -v;
  std::vector<double> dudnu(n, 0.0);
  for (std::size_t k = 0; k < solve.boundary_nodes.size(); ++k) {
    const auto i = solve.boundary_nodes[k];
    dudnu[i] = solve.normal_derivative[k];
    lap[i] += a.boundary_area[i] * dudnu[i];
  }
  DeformedBoundaryReport rep;
  rep.R_new.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.R_new[i] = (R[i] * u[i] - 8.0 * lap[i] / a.mass[i]) / std::pow(u[i], 5);
  }
  rep.min_R_new = *std::min_element(rep.R_new.begin(), rep.R_new.end());

  const auto H = tet_boundary_mean_curvature(domain);
  const double tol = domain.tolerance();
  rep.outer_metric_preserved = rep.inner_metric_preserved = true;
  rep.mean_convex = true;
  for (std::size_t k = 0; k < H.vertex.size(); ++k) {
    const auto i = H.vertex[k];
    const double Hn = H.mean_curvature[k] / (u[i] * u[i]) + 4.0 * dudnu[i] / (u[i] * u[i] * u[i]);
    rep.nodes.push_back(i);
    rep.tags.push_back(H.tag[k]);
    rep.old_H.push_back(H.mean_curvature[k]);
    rep.new_H.push_back(Hn);
    rep.metric_factor.push_back(std::pow(u[i], 4));
    const bool same = std::abs(u[i] - 1.0) <= tol;
    if (H.tag[k] == BoundaryTag::outer) {
      rep.outer_metric_preserved = rep.outer_metric_preserved && same;
      rep.mean_convex = rep.mean_convex && Hn > 0.0;
    } else {
      rep.inner_metric_preserved = rep.inner_metric_preserved && same;
    }
  }
  return rep;
}

ScalarFlatResult scalar_flat_deformation(const TetDomain& domain) {
  for (const auto& tri : domain.boundary()) {
    if (tri.tag != BoundaryTag::outer) {
      throw Error(Errc::invalid_argument, "scalar-flat deformation: domain must have a single boundary piece");
    }
  }
  const std::size_t n = domain.vertex_count();
  auto solve = solve_conformal(domain, vertex_scalar_curvature(domain), ScalarField(n, 0.0), BoundaryConditions{});
  require_positive(solve, "scalar-flat deformation");
  auto rep = conformal_laws(domain, solve);
  double old_total = 0.0, new_total = 0.0;
  const auto H = tet_boundary_mean_curvature(domain);
  for (std::size_t k = 0; k < H.vertex.size(); ++k) {
    old_total += rep.old_H[k] * H.dual_area[k];
    new_total += rep.new_H[k] * H.dual_area[k];
  }
  return {std::move(solve), std::move(rep), old_total, new_total};
}

}  // namespace qlmass

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qlmass/geometry.hpp"

// Linear conformal-Laplacian solves  Delta u - (R/8) u = rhs  with mixed
// boundary data, the conformal transformation laws for g -> u^4 g, and the
// constructions built from them.
namespace qlmass {

enum class BoundaryKind { dirichlet, neumann };

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::dirichlet;
  // Dirichlet value, or outward normal derivative for Neumann.
  double value = 1.0;

  static BoundaryCondition dirichlet(double v) { return {BoundaryKind::dirichlet, v}; }
  static BoundaryCondition neumann(double v) { return {BoundaryKind::neumann, v}; }
};

// One condition per boundary piece: outer is the outer sphere of a radial
// domain or the triangles tagged outer; inner is the inner sphere or the
// horizon-tagged triangles (ignored when that piece is absent).
struct BoundaryConditions {
  BoundaryCondition outer = BoundaryCondition::dirichlet(1.0);
  BoundaryCondition inner = BoundaryCondition::dirichlet(1.0);
};

struct ConformalSolve {
  ScalarField u;
  // Boundary nodes (radial: index 0 for an inner boundary, n-1 for the outer
  // one) with their tag and outward normal derivative of u.
  std::vector<std::size_t> boundary_nodes;
  std::vector<BoundaryTag> boundary_tags;
  std::vector<double> normal_derivative;
  // Boundary area carried by each node (radial: the whole sphere).
  std::vector<double> boundary_weights;
  // Relative residual of the assembled linear system.
  double residual = 0.0;
  std::size_t iterations = 0;
  double min_u = 0.0;
  double max_u = 0.0;
  bool positive = false;

  // Area-weighted mean normal derivative over one boundary piece.
  double normal_derivative_at(BoundaryTag tag) const;
};

// Throws NonPositiveSolution unless every nodal value is positive.
void require_positive(const ConformalSolve& solve, const std::string& what);

// Radial domains: vertex-centred finite volumes for (1/h^2)(h^2 u')', direct
// tridiagonal solve.
ConformalSolve solve_conformal(const RadialDomain& domain, const ScalarField& scalar_curvature,
                               const ScalarField& rhs, const BoundaryConditions& bc);

// Tet domains: piecewise-linear Galerkin with lumped potential and source
// terms, Jacobi-preconditioned conjugate gradients to relative residual 1e-10.
ConformalSolve solve_conformal(const TetDomain& domain, const ScalarField& scalar_curvature,
                               const ScalarField& rhs, const BoundaryConditions& bc);

// Per-vertex scalar curvature of a tet domain: volume-weighted average of the
// per-tet values.
ScalarField vertex_scalar_curvature(const TetDomain& domain);

struct DeformedBoundaryReport {
  std::vector<std::size_t> nodes;
  std::vector<BoundaryTag> tags;
  std::vector<double> old_H;
  std::vector<double> new_H;
  // u^4 at the node: the factor multiplying the induced boundary metric.
  std::vector<double> metric_factor;
  // Scalar curvature of u^4 g at every node of the domain.
  std::vector<double> R_new;
  double min_R_new = 0.0;
  bool outer_metric_preserved = false;
  bool inner_metric_preserved = false;
  // New mean curvature positive at every outer node.
  bool mean_convex = false;

  bool boundary_metric_preserved() const noexcept { return outer_metric_preserved && inner_metric_preserved; }
};

// R(u^4 g) = u^-5 (R u - 8 Delta u) and H(u^4 g) = u^-2 H + 4 u^-3 du/dnu.
// Radial: Delta u and du/dnu from fourth-order differences of u unless
// normal derivatives are supplied.
DeformedBoundaryReport conformal_laws(const RadialDomain& domain, const ScalarField& u,
                                      std::optional<double> du_dnu_inner = std::nullopt,
                                      std::optional<double> du_dnu_outer = std::nullopt);
DeformedBoundaryReport conformal_laws(const RadialDomain& domain, const ConformalSolve& solve);
// Tet: Delta u from the lumped Galerkin operator with the solve's boundary
// fluxes.
DeformedBoundaryReport conformal_laws(const TetDomain& domain, const ConformalSolve& solve);

struct DoublingResult {
  double epsilon = 0.0;
  // Scalar-flat metric g~ = u^4 g (u = 1 when g is already scalar-flat).
  RadialDomain scalar_flat;
  std::optional<ConformalSolve> flattening;
  // phi1 harmonic in g~ with phi1 = 1 on the outer sphere and 1 - epsilon/2 on
  // the horizon; phi2 = (2 - epsilon) - phi1.
  ConformalSolve phi1;
  std::vector<double> phi2;
  RadialDomain g1;
  RadialDomain g2;
  DeformedBoundaryReport report1;
  DeformedBoundaryReport report2;
  // Mean curvature of the outer sphere in g~.
  double H_reference = 0.0;
  // |area radius from g1 - area radius from g2| on the horizon.
  double horizon_metric_mismatch = 0.0;
  // Mean curvatures of the horizon in g1 and g2 with respect to the normals
  // pointing out of each copy, and their sum (the corner jump).
  double horizon_H1 = 0.0;
  double horizon_H2 = 0.0;
  double corner_jump = 0.0;
  // min over the outer sphere of H_g1 - H_g~.
  double outer_margin = 0.0;
  // max over the outer sphere of H_g~ - H_g2.
  double eta = 0.0;
};

// Requires an inner boundary with vanishing mean curvature (NotMinimal).
DoublingResult doubling_construct(const RadialDomain& domain, double epsilon);

struct PerturbationReport {
  double epsilon = 0.0;
  // Fixed sign-definite source of  Delta w - (R/8) w = phi,  w = 0 on the
  // boundary.
  double phi = 0.0;
  ConformalSolve w;
  DeformedBoundaryReport report;
  double total_H_old = 0.0;
  double total_H_new = 0.0;
  double min_H_old = 0.0;
  double min_H_new = 0.0;
};

// Metric (1 + eps w)^4 g with phi = +1: w <= 0, dw/dnu >= 0, so the outer mean
// curvature increases by 4 eps dw/dnu.
PerturbationReport weak_meanconvex_fix(const RadialDomain& domain, double epsilon);

// Metric (1 + tau w)^4 g with phi = -1: R(g_tau) = (1 + tau w)^-5 (R + 8 tau) > 0
// at the price of a small mean-curvature deficit.
PerturbationReport positivity_perturbation(const RadialDomain& domain, double tau);

struct ScalarFlatResult {
  ConformalSolve solve;
  DeformedBoundaryReport report;
  double total_H_old = 0.0;
  double total_H_new = 0.0;
};

// u with Delta u - (R/8) u = 0, u = 1 on the boundary; u^4 g is scalar-flat
// with the same boundary metric. Requires a single boundary piece.
ScalarFlatResult scalar_flat_deformation(const RadialDomain& domain);
ScalarFlatResult scalar_flat_deformation(const TetDomain& domain);

}  // namespace qlmass

#include "qlmass/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass {

namespace {

constexpr double kPi = std::numbers::pi;

// Integral of the square of the linear interpolant over the half of a segment
// of length len adjacent to the end where it takes value a (other end b).
double half_segment_volume(double a, double b, double len) {
  const double d = b - a;
  return len * (0.5 * a * a + 0.25 * a * d + d * d / 24.0);
}

double sphere_area(double h) { return 4.0 * kPi * h * h; }

void check_field(const ScalarField& f, std::size_t n, const char* name) {
  if (f.size() != n) throw Error(Errc::invalid_argument, std::string("conformal solve: ") + name + " size mismatch");
  for (const double v : f.values()) {
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, std::string("conformal solve: ") + name + " not finite");
  }
}

void check_potential(const ScalarField& R, double tol, bool has_dirichlet) {
  const auto v = R.values();
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  if (lo < -tol) {
    std::ostringstream msg;
    msg << "conformal solve: requires R >= 0 (min R = " << lo << ")";
    throw Error(Errc::invalid_argument, msg.str());
  }
  if (!has_dirichlet && hi <= tol) {
    throw Error(Errc::invalid_argument,
                "conformal solve: pure Neumann problem with R = 0 is singular; add a Dirichlet piece");
  }
}

void finish(ConformalSolve& out) {
  const auto u = out.u.values();
  out.min_u = *std::min_element(u.begin(), u.end());
  out.max_u = *std::max_element(u.begin(), u.end());
  out.positive = out.min_u > 0.0;
}

}  // namespace

double ConformalSolve::normal_derivative_at(BoundaryTag tag) const {
  double sum = 0.0, weight = 0.0;
  for (std::size_t k = 0; k < boundary_nodes.size(); ++k) {
    if (boundary_tags[k] != tag) continue;
    sum += normal_derivative[k] * boundary_weights[k];
    weight += boundary_weights[k];
  }
  if (weight == 0.0) throw Error(Errc::invalid_argument, "normal derivative: boundary piece is absent");
  return sum / weight;
}

void require_positive(const ConformalSolve& solve, const std::string& what) {
  if (!solve.positive) {
    std::ostringstream msg;
    msg << what << ": conformal factor is not positive (min u = " << solve.min_u << ")";
    throw Error(Errc::nonpositive_solution, msg.str());
  }
}

ConformalSolve solve_conformal(const RadialDomain& domain, const ScalarField& scalar_curvature,
                               const ScalarField& rhs, const BoundaryConditions& bc) {
  const std::size_t n = domain.size();
  check_field(scalar_curvature, n, "scalar curvature");
  check_field(rhs, n, "right-hand side");
  const bool inner = domain.has_inner_boundary();
  const bool has_dirichlet =
      bc.outer.kind == BoundaryKind::dirichlet || (inner && bc.inner.kind == BoundaryKind::dirichlet);
  check_potential(scalar_curvature, domain.tolerance(), has_dirichlet);

  const auto r = domain.r();
  const auto h = domain.h();
  std::vector<double> c(n - 1), vol(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double len = r[i + 1] - r[i];
    const double hm = 0.5 * (h[i] + h[i + 1]);
    c[i] = hm * hm / len;
    vol[i] += half_segment_volume(h[i], h[i + 1], len);
    vol[i + 1] += half_segment_volume(h[i + 1], h[i], len);
  }
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = -vol[i] * scalar_curvature[i] / 8.0;
    b[i] = vol[i] * rhs[i];
    if (i > 0) {
      lower[i] = c[i - 1];
      diag[i] -= c[i - 1];
    }
    if (i + 1 < n) {
      upper[i] = c[i];
      diag[i] -= c[i];
    }
  }
  auto apply = [&](std::size_t i, const BoundaryCondition& cond) {
    if (cond.kind == BoundaryKind::dirichlet) {
      lower[i] = upper[i] = 0.0;
      diag[i] = 1.0;
      b[i] = cond.value;
    } else {
      b[i] -= h[i] * h[i] * cond.value;
    }
  };
  if (inner) apply(0, bc.inner);
  apply(n - 1, bc.outer);

  ConformalSolve out;
  out.u = ScalarField(numerics::solve_tridiagonal(lower, diag, upper, b));
  const auto u = out.u.values();
  for (const double v : u) {
    if (!std::isfinite(v)) throw Error(Errc::solver_divergence, "radial conformal solve produced non-finite values");
  }
  double res = 0.0, bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = diag[i] * u[i] - b[i];
    if (i > 0) a += lower[i] * u[i - 1];
    if (i + 1 < n) a += upper[i] * u[i + 1];
    res += a * a;
    bnorm += b[i] * b[i];
  }
  out.residual = bnorm > 0.0 ? std::sqrt(res / bnorm) : std::sqrt(res);
  out.iterations = 1;

  // Half-cell balance: h^2 du/dnu equals the interior flux plus the source.
  auto source = [&](std::size_t i) { return vol[i] * (scalar_curvature[i] * u[i] / 8.0 + rhs[i]); };
  if (inner) {
    const double g = bc.inner.kind == BoundaryKind::neumann ? bc.inner.value
                                                             : (source(0) - c[0] * (u[1] - u[0])) / (h[0] * h[0]);
    out.boundary_nodes.push_back(0);
    out.boundary_tags.push_back(BoundaryTag::horizon);
    out.normal_derivative.push_back(g);
    out.boundary_weights.push_back(sphere_area(h[0]));
  }
  {
    const std::size_t i = n - 1;
    const double g = bc.outer.kind == BoundaryKind::neumann ? bc.outer.value
                                                             : (c[i - 1] * (u[i] - u[i - 1]) + source(i)) / (h[i] * h[i]);
    out.boundary_nodes.push_back(i);
    out.boundary_tags.push_back(BoundaryTag::outer);
    out.normal_derivative.push_back(g);
    out.boundary_weights.push_back(sphere_area(h[i]));
  }
  finish(out);
  return out;
}

DeformedBoundaryReport conformal_laws(const RadialDomain& domain, const ScalarField& u,
                                      std::optional<double> du_dnu_inner, std::optional<double> du_dnu_outer) {
  const std::size_t n = domain.size();
  if (u.size() != n) throw Error(Errc::invalid_argument, "conformal laws: factor size mismatch");
  for (const double v : u.values()) {
    if (!(v > 0.0)) throw Error(Errc::nonpositive_factor, "conformal laws: factor must be positive");
  }
  const bool center = domain.inner_role() == InnerRole::regular_center;
  const auto d = numerics::differentiate(domain.r(), u.values(),
                                         center ? numerics::Parity::even : numerics::Parity::none,
                                         numerics::Parity::none);
  const auto h = domain.h();
  const auto dh = domain.dh();
  const auto R = radial_scalar_curvature(domain);
  const double tol = domain.tolerance();

  DeformedBoundaryReport rep;
  rep.R_new.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lap = (center && i == 0) ? 3.0 * d.second[0] : d.second[i] + 2.0 * dh[i] / h[i] * d.first[i];
    rep.R_new[i] = (R[i] * u[i] - 8.0 * lap) / std::pow(u[i], 5);
  }
  rep.min_R_new = *std::min_element(rep.R_new.begin(), rep.R_new.end());

  auto add = [&](std::size_t i, BoundaryTag tag, Side side, double dudnu) {
    const double H = boundary_mean_curvature_radial(domain, side);
    rep.nodes.push_back(i);
    rep.tags.push_back(tag);
    rep.old_H.push_back(H);
    rep.new_H.push_back(H / (u[i] * u[i]) + 4.0 * dudnu / (u[i] * u[i] * u[i]));
    rep.metric_factor.push_back(std::pow(u[i], 4));
  };
  rep.inner_metric_preserved = true;
  if (domain.has_inner_boundary()) {
    add(0, BoundaryTag::horizon, Side::inner, du_dnu_inner.value_or(-d.first[0]));
    rep.inner_metric_preserved = std::abs(u[0] - 1.0) <= tol;
  }
  add(n - 1, BoundaryTag::outer, Side::outer, du_dnu_outer.value_or(d.first[n - 1]));
  rep.outer_metric_preserved = std::abs(u[n - 1] - 1.0) <= tol;
  rep.mean_convex = rep.new_H.back() > 0.0;
  return rep;
}

DeformedBoundaryReport conformal_laws(const RadialDomain& domain, const ConformalSolve& solve) {
  std::optional<double> inner, outer;
  for (std::size_t k = 0; k < solve.boundary_nodes.size(); ++k) {
    (solve.boundary_tags[k] == BoundaryTag::outer ? outer : inner) = solve.normal_derivative[k];
  }
  return conformal_laws(domain, solve.u, inner, outer);
}

namespace {

double grid_tolerance(const RadialDomain& d) {
  const double dr = d.r()[1] - d.r()[0];
  return std::max(d.tolerance(), dr * dr);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

DoublingResult doubling_construct(const RadialDomain& domain, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::invalid_argument, "doubling: epsilon must lie in (0, 1)");
  if (!domain.has_inner_boundary()) throw Error(Errc::not_minimal, "doubling: domain has no inner boundary");
  const double H_inner = boundary_mean_curvature_radial(domain, Side::inner);
  if (std::abs(domain.dh()[0]) > grid_tolerance(domain)) {
    std::ostringstream msg;
    msg << "doubling: inner boundary is not minimal (H = " << H_inner << ")";
    throw Error(Errc::not_minimal, msg.str());
  }

  const std::size_t n = domain.size();
  const auto R = radial_scalar_curvature(domain);
  std::optional<ConformalSolve> flattening;
  std::optional<RadialDomain> flat;
  if (max_abs(R) > domain.tolerance()) {
    BoundaryConditions bc{BoundaryCondition::dirichlet(1.0), BoundaryCondition::neumann(0.0)};
    auto u = solve_conformal(domain, ScalarField(R), ScalarField(n, 0.0), bc);
    require_positive(u, "doubling");
    const double inner = 0.0;
    const double outer = u.normal_derivative_at(BoundaryTag::outer);
    flat = domain.conformally_deformed(u.u.values(), &inner, &outer);
    flattening = std::move(u);
  } else {
    flat = domain;
  }

  BoundaryConditions bc{BoundaryCondition::dirichlet(1.0), BoundaryCondition::dirichlet(1.0 - 0.5 * epsilon)};
  auto phi1 = solve_conformal(*flat, ScalarField(n, 0.0), ScalarField(n, 0.0), bc);
  require_positive(phi1, "doubling");
  std::vector<double> phi2(n);
  for (std::size_t i = 0; i < n; ++i) phi2[i] = (2.0 - epsilon) - phi1.u[i];
  const double d1_in = phi1.normal_derivative_at(BoundaryTag::horizon);
  const double d1_out = phi1.normal_derivative_at(BoundaryTag::outer);
  const double d2_in = -d1_in, d2_out = -d1_out;

  auto g1 = flat->conformally_deformed(phi1.u.values(), &d1_in, &d1_out);
  auto g2 = flat->conformally_deformed(phi2, &d2_in, &d2_out);
  auto report1 = conformal_laws(*flat, phi1.u, d1_in, d1_out);
  auto report2 = conformal_laws(*flat, ScalarField(phi2), d2_in, d2_out);

  const double H_ref = boundary_mean_curvature_radial(*flat, Side::outer);
  const double h0 = flat->h()[0];
  const double mismatch = std::abs(phi1.u[0] * phi1.u[0] * h0 - phi2[0] * phi2[0] * h0);
  const double H1 = report1.new_H.front();
  const double H2 = report2.new_H.front();
  const double margin = report1.new_H.back() - H_ref;
  const double eta = H_ref - report2.new_H.back();

  return DoublingResult{epsilon,      std::move(*flat), std::move(flattening), std::move(phi1),
                        std::move(phi2), std::move(g1),    std::move(g2),         std::move(report1),
                        std::move(report2), H_ref,         mismatch,              H1,
                        H2,           H1 + H2,          margin,                eta};
}

namespace {

PerturbationReport perturb(const RadialDomain& domain, double epsilon, double phi, const char* what) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(Errc::invalid_argument, std::string(what) + ": parameter must be nonnegative");
  }
  const std::size_t n = domain.size();
  const auto R = radial_scalar_curvature(domain);
  BoundaryConditions bc{BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(0.0)};
  auto w = solve_conformal(domain, ScalarField(R), ScalarField(n, phi), bc);

  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = 1.0 + epsilon * w.u[i];
    if (!(u[i] > 0.0)) throw Error(Errc::nonpositive_factor, std::string(what) + ": 1 + eps w is not positive");
  }
  std::optional<double> inner;
  if (domain.has_inner_boundary()) inner = epsilon * w.normal_derivative_at(BoundaryTag::horizon);
  const double outer = epsilon * w.normal_derivative_at(BoundaryTag::outer);
  auto rep = conformal_laws(domain, ScalarField(u), inner, outer);

  const double h_out = domain.h()[n - 1];
  const double H_old = rep.old_H.back();
  const double H_new = rep.new_H.back();
  PerturbationReport out{epsilon, phi, std::move(w), std::move(rep), 0.0, 0.0, 0.0, 0.0};
  out.total_H_old = H_old * sphere_area(h_out);
  out.total_H_new = H_new * sphere_area(u[n - 1] * u[n - 1] * h_out);
  out.min_H_old = H_old;
  out.min_H_new = H_new;
  return out;
}

void require_nonnegative_R(const RadialDomain& domain, const char* what) {
  const auto R = radial_scalar_curvature(domain);
  const double lo = *std::min_element(R.begin(), R.end());
  if (lo < -domain.tolerance()) {
    std::ostringstream msg;
    msg << what << ": requires R >= 0 (min R = " << lo << ")";
    throw Error(Errc::invalid_argument, msg.str());
  }
}

}  // namespace

PerturbationReport weak_meanconvex_fix(const RadialDomain& domain, double epsilon) {
  require_nonnegative_R(domain, "weak mean-convexity fix");
  if (boundary_mean_curvature_radial(domain, Side::outer) < -domain.tolerance()) {
    throw Error(Errc::invalid_argument, "weak mean-convexity fix: requires H >= 0 on the outer boundary");
  }
  return perturb(domain, epsilon, 1.0, "weak mean-convexity fix");
}

PerturbationReport positivity_perturbation(const RadialDomain& domain, double tau) {
  require_nonnegative_R(domain, "positivity perturbation");
  return perturb(domain, tau, -1.0, "positivity perturbation");
}

ScalarFlatResult scalar_flat_deformation(const RadialDomain& domain) {
  if (domain.has_inner_boundary()) {
    throw Error(Errc::invalid_argument, "scalar-flat deformation: domain must have a single boundary piece");
  }
  const std::size_t n = domain.size();
  const auto R = radial_scalar_curvature(domain);
  auto solve = solve_conformal(domain, ScalarField(R), ScalarField(n, 0.0), BoundaryConditions{});
  require_positive(solve, "scalar-flat deformation");
  auto rep = conformal_laws(domain, solve);
  const double area = sphere_area(domain.h()[n - 1]);
  const double old_total = rep.old_H.back() * area;
  const double new_total = rep.new_H.back() * area;
  return {std::move(solve), std::move(rep), old_total, new_total};
}

}  // namespace qlmass

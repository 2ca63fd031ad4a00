#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Finite differences, quadrature and small dense/tridiagonal kernels shared by
// every geometric module. All grids are strictly increasing.
namespace qlmass::numerics {

// Symmetry of a sampled function about a grid endpoint. An odd endpoint is a
// point reflection through (x0, y0); an even endpoint a mirror reflection.
// Used to keep centered stencils at poles and regular centers.
enum class Parity { none, odd, even };

struct Derivatives {
  std::vector<double> first;
  std::vector<double> second;
};

bool is_uniform(std::span<const double> x, double rel_tol = 1e-9);

// Fourth-order finite differences on uniform grids (five-point centered,
// six-point one-sided at the ends unless a parity supplies ghost values).
// Non-uniform grids use the same stencil widths through Fornberg weights.
Derivatives differentiate(std::span<const double> x, std::span<const double> y,
                          Parity start = Parity::none, Parity end = Parity::none);

// Fornberg finite-difference weights: w[k * nodes.size() + j] is the weight of
// sample j in the k-th derivative at z, k = 0..max_order.
std::vector<double> fornberg_weights(double z, std::span<const double> nodes, int max_order);

// Composite trapezoid with Gregory end corrections on uniform grids of at least
// eight nodes (fourth order); plain trapezoid otherwise.
double integrate(std::span<const double> x, std::span<const double> y);

// Running integral from x[0]; each interval integrates the cubic through its
// four nearest samples.
std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> y);

// Value at `at` of the quadratic in (x - at)^2 through three samples.
// Extrapolates quantities that are even about a pole or center.
double extrapolate_even(std::span<const double> x, std::span<const double> y, double at);

// Thomas algorithm. lower[0] and upper[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm-sequence
// bisection. offdiag has size n - 1.
double smallest_eigenvalue_tridiagonal(std::span<const double> diag,
                                       std::span<const double> offdiag);

// Minimum of samples refined by a parabola through the discrete minimizer and
// its neighbours. Returns the abscissa and the value.
struct RefinedMinimum {
  double x;
  double value;
  std::size_t index;
};
RefinedMinimum refined_minimum(std::span<const double> x, std::span<const double> y);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace qlmass::numerics

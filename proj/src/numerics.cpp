#include "qlmass/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlmass/error.hpp"

namespace qlmass::numerics {

bool is_uniform(std::span<const double> x, double rel_tol) {
  if (x.size() < 2) return true;
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > rel_tol * std::abs(h)) return false;
  }
  return true;
}

std::vector<double> fornberg_weights(double z, std::span<const double> nodes, int max_order) {
  const std::size_t n = nodes.size();
  const auto m = static_cast<std::size_t>(max_order);
  std::vector<double> c((m + 1) * n, 0.0);
  auto at = [&](std::size_t k, std::size_t j) -> double& { return c[k * n + j]; };

  double c1 = 1.0;
  double c4 = nodes[0] - z;
  at(0, 0) = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          at(k, i) = c1 * (static_cast<double>(k) * at(k - 1, i - 1) - c5 * at(k, i - 1)) / c2;
        }
        at(0, i) = -c1 * c5 * at(0, i - 1) / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        at(k, j) = (c4 * at(k, j) - static_cast<double>(k) * at(k - 1, j)) / c3;
      }
      at(0, j) = c4 * at(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

// Sample at a possibly out-of-range index, using endpoint parity for ghosts.
struct Extended {
  std::span<const double> x;
  std::span<const double> y;
  Parity start;
  Parity end;

  long size() const { return static_cast<long>(x.size()); }

  double xa(long j) const {
    if (j < 0) return 2.0 * x[0] - x[static_cast<std::size_t>(-j)];
    if (j >= size()) {
      const auto n1 = static_cast<std::size_t>(size() - 1);
      return 2.0 * x[n1] - x[static_cast<std::size_t>(2 * (size() - 1) - j)];
    }
    return x[static_cast<std::size_t>(j)];
  }

  double ya(long j) const {
    if (j < 0) {
      const double v = y[static_cast<std::size_t>(-j)];
      return start == Parity::odd ? 2.0 * y[0] - v : v;
    }
    if (j >= size()) {
      const auto n1 = static_cast<std::size_t>(size() - 1);
      const double v = y[static_cast<std::size_t>(2 * (size() - 1) - j)];
      return end == Parity::odd ? 2.0 * y[n1] - v : v;
    }
    return y[static_cast<std::size_t>(j)];
  }
};

}  // namespace

Derivatives differentiate(std::span<const double> x, std::span<const double> y, Parity start,
                          Parity end) {
  const std::size_t n = x.size();
  if (n != y.size()) throw Error(Errc::invalid_argument, "differentiate: size mismatch");
  if (n < 6) throw Error(Errc::invalid_argument, "differentiate: need at least 6 samples");

  const Extended ext{x, y, start, end};
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < n; ++i) {
    const long li = static_cast<long>(i);
    const long first = start != Parity::none ? -(ext.size() - 1) : 0;
    const long last = end != Parity::none ? 2 * (ext.size() - 1) : ext.size() - 1;
    long lo = li - 2;
    long hi = li + 2;
    // One-sided windows take six samples so the second derivative stays fourth order.
    if (lo < first) {
      lo = first;
      hi = first + 5;
    } else if (hi > last) {
      hi = last;
      lo = last - 5;
    }
    xs.clear();
    ys.clear();
    for (long j = lo; j <= hi; ++j) {
      xs.push_back(ext.xa(j));
      ys.push_back(ext.ya(j));
    }
    const auto w = fornberg_weights(x[i], xs, 2);
    const std::size_t m = xs.size();
    double d1 = 0.0;
    double d2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      d1 += w[m + j] * ys[j];
      d2 += w[2 * m + j] * ys[j];
    }
    d.first[i] = d1;
    d.second[i] = d2;
  }
  return d;
}

double integrate(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw Error(Errc::invalid_argument, "integrate: size mismatch");
  if (n < 2) return 0.0;
  if (n >= 8 && is_uniform(x)) {
    static constexpr double kEnd[4] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0, 1.0};
    const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = 1.0;
      if (i < 3) w = kEnd[i];
      if (n - 1 - i < 3) w = kEnd[n - 1 - i];
      sum += w * y[i];
    }
    return h * sum;
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw Error(Errc::invalid_argument, "cumulative_integral: size mismatch");
  std::vector<double> out(n, 0.0);
  if (n < 4) {
    for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return out;
  }
  static const double g = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t lo = i == 0 ? 0 : i - 1;
    if (lo + 3 >= n) lo = n - 4;
    const double a = x[i];
    const double b = x[i + 1];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (const double t : {mid - half * g, mid + half * g}) {
      double v = 0.0;
      for (std::size_t j = lo; j < lo + 4; ++j) {
        double l = 1.0;
        for (std::size_t k = lo; k < lo + 4; ++k) {
          if (k != j) l *= (t - x[k]) / (x[j] - x[k]);
        }
        v += l * y[j];
      }
      acc += v;
    }
    out[i + 1] = out[i] + half * acc;
  }
  return out;
}

double extrapolate_even(std::span<const double> x, std::span<const double> y, double at) {
  if (x.size() < 3 || y.size() < 3) throw Error(Errc::invalid_argument, "extrapolate_even: need 3 samples");
  double t[3];
  for (int i = 0; i < 3; ++i) t[i] = (x[static_cast<std::size_t>(i)] - at) * (x[static_cast<std::size_t>(i)] - at);
  double v = 0.0;
  for (int j = 0; j < 3; ++j) {
    double l = 1.0;
    for (int k = 0; k < 3; ++k) {
      if (k != j) l *= (0.0 - t[k]) / (t[j] - t[k]);
    }
    v += l * y[static_cast<std::size_t>(j)];
  }
  return v;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw Error(Errc::invalid_argument, "solve_tridiagonal: size mismatch");
  }
  std::vector<double> c(n);
  std::vector<double> d(n);
  std::vector<double> x(n);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) throw Error(Errc::solver_divergence, "zero pivot in tridiagonal solve");
  c[0] = upper[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw Error(Errc::solver_divergence, "zero pivot in tridiagonal solve");
    }
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

namespace {

std::size_t count_below(std::span<const double> diag, std::span<const double> off, double shift) {
  std::size_t count = 0;
  double q = diag[0] - shift;
  const double tiny = std::numeric_limits<double>::min();
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (q == 0.0) q = tiny;
    q = diag[i] - shift - off[i - 1] * off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

double smallest_eigenvalue_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0 || offdiag.size() + 1 != n) throw Error(Errc::invalid_argument, "tridiagonal eigenvalue: bad sizes");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(diag, offdiag, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RefinedMinimum refined_minimum(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) throw Error(Errc::invalid_argument, "refined_minimum: bad sizes");
  const auto it = std::min_element(y.begin(), y.end());
  const auto k = static_cast<std::size_t>(it - y.begin());
  RefinedMinimum out{x[k], y[k], k};
  if (k == 0 || k + 1 >= x.size()) return out;
  const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
  const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (curv <= 0.0) return out;
  // Newton form p(x) = y0 + d01 (x - x0) + curv (x - x0)(x - x1).
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  if (xv < x0 || xv > x2) return out;
  out.x = xv;
  out.value = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
  return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (a <= 0.0 || b <= 0.0) throw Error(Errc::invalid_argument, "logspace: endpoints must be positive");
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& e : v) e = std::exp(e);
  return v;
}

}  // namespace qlmass::numerics

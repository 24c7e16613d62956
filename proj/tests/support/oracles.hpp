#pragma once

// Reference implementations used by the tests. They are deliberately naive
// (explicit loops, no shared code with the library) so that agreement is
// meaningful.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;

inline Matrix squared_distances(const Matrix& x) {
  const auto n = x.cols();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < x.rows(); ++k) {
        const double diff = x(k, i) - x(k, j);
        s += diff * diff;
      }
      d(i, j) = s;
    }
  }
  return d;
}

/// Gram matrix of the explicitly centered points.
inline Matrix centered_gram(const Matrix& x) {
  Matrix c = x;
  const Eigen::VectorXd mean = x.rowwise().mean();
  for (Eigen::Index j = 0; j < x.cols(); ++j) c.col(j) -= mean;
  return c.transpose() * c;
}

/// Sum over observed pairs i < j of f(edm_ij, d_ij).
template <typename F>
double pair_sum(const Matrix& x, const Matrix& observed, const Matrix& mask, F f) {
  const Matrix e = squared_distances(x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < x.cols(); ++j) {
      if (mask(i, j) != 0.0) total += f(e(i, j), observed(i, j));
    }
  }
  return total;
}

inline double s_stress(const Matrix& x, const Matrix& observed, const Matrix& mask) {
  return pair_sum(x, observed, mask, [](double e, double d) { return (e - d) * (e - d); });
}

inline double raw_stress(const Matrix& x, const Matrix& observed, const Matrix& mask) {
  return pair_sum(x, observed, mask, [](double e, double d) {
    const double r = std::sqrt(e) - std::sqrt(d);
    return r * r;
  });
}

/// s-stress terms that involve point i, with coordinate (k, i) set to v.
inline double stress_through_point(Matrix x, const Matrix& observed, const Matrix& mask,
                                   Eigen::Index i, Eigen::Index k, double v) {
  x(k, i) = v;
  double total = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (j == i || mask(i, j) == 0.0) continue;
    const double e = (x.col(i) - x.col(j)).squaredNorm();
    total += (e - observed(i, j)) * (e - observed(i, j));
  }
  return total;
}

/// Minimizer of f over a uniform grid; first grid point wins ties.
template <typename F>
double grid_argmin(F f, double lo, double hi, double step) {
  double best_x = lo;
  double best_f = std::numeric_limits<double>::infinity();
  const auto count = static_cast<long>(std::floor((hi - lo) / step));
  for (long t = 0; t <= count; ++t) {
    const double x = lo + static_cast<double>(t) * step;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

/// Global minimizer of f on [lo, hi]: grid scan, every grid-local minimum
/// polished by ternary search within one step, and minima within tie_tol of
/// the best resolved to the smallest abscissa.
template <typename F>
double polished_grid_argmin(F f, double lo, double hi, double step, double tie_tol = 1e-9) {
  const auto count = static_cast<long>(std::floor((hi - lo) / step));
  auto at = [&](long t) { return f(lo + static_cast<double>(t) * step); };
  std::vector<std::pair<double, double>> minima;  // (x, f(x))
  for (long t = 0; t <= count; ++t) {
    const double v = at(t);
    if ((t > 0 && at(t - 1) < v) || (t < count && at(t + 1) < v)) continue;
    double a = lo + static_cast<double>(std::max(t - 1, 0L)) * step;
    double b = lo + static_cast<double>(std::min(t + 1, count)) * step;
    for (int it = 0; it < 200; ++it) {
      const double m1 = a + (b - a) / 3.0;
      const double m2 = b - (b - a) / 3.0;
      if (f(m1) <= f(m2)) {
        b = m2;
      } else {
        a = m1;
      }
    }
    const double x = 0.5 * (a + b);
    minima.emplace_back(x, f(x));
  }
  double best_f = std::numeric_limits<double>::infinity();
  for (const auto& m : minima) best_f = std::min(best_f, m.second);
  const double band = tie_tol * std::max(1.0, std::abs(best_f));
  for (const auto& m : minima) {
    if (m.second <= best_f + band) return m.first;
  }
  return lo;
}

inline std::vector<double> pairwise_1d(const std::vector<double>& p) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) out.push_back(std::abs(p[i] - p[j]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool same_multiset(std::vector<double> a, std::vector<double> b, double tol) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

inline std::vector<double> canonical(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double lo = p.front();
  const double hi = p.back();
  std::vector<double> a, b;
  for (double v : p) a.push_back(v - lo);
  for (auto it = p.rbegin(); it != p.rend(); ++it) b.push_back(hi - *it);
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()) ? b : a;
}

/// Every 1D labeling of the multiset, by brute force. Point 0 sits at the
/// origin, so the other points are n-1 entries of the multiset: the largest
/// value plus any n-2 of the rest. Each choice is kept if it regenerates
/// the multiset.
inline std::vector<std::vector<double>> turnpike_brute_force(std::vector<double> values,
                                                             double tol) {
  std::size_t n = 1;
  while (n * (n - 1) / 2 < values.size()) ++n;
  std::sort(values.begin(), values.end());
  std::vector<std::vector<double>> found;
  if (n == 1) return {{0.0}};
  const double width = values.back();
  const std::size_t pool = values.size() - 1;
  const std::size_t pick = n - 2;
  std::vector<bool> choose(pool, false);
  std::fill(choose.begin(), choose.begin() + static_cast<long>(pick), true);
  do {
    std::vector<double> pts{0.0, width};
    for (std::size_t t = 0; t < pool; ++t) {
      if (choose[t]) pts.push_back(values[t]);
    }
    if (!same_multiset(pairwise_1d(pts), values, tol)) continue;
    auto c = canonical(pts);
    const bool dup = std::any_of(found.begin(), found.end(), [&](const auto& f) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i] - c[i]) > tol) return false;
      }
      return true;
    });
    if (!dup) found.push_back(std::move(c));
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return found;
}

}  // namespace oracle

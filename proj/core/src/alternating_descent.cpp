#include "edmkit/completion.hpp"
#include "edmkit/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace edm {

namespace {

QuarticCoeffs restricted_quartic(const NoisyObservation& obs, const Matrix& c, Index i,
                                 Index k) {
  QuarticCoeffs q;
  for (Index j = 0; j < c.cols(); ++j) {
    if (j == i || !obs.mask().observed(i, j)) continue;
    const double a = c(k, j);
    double others = 0.0;
    for (Index l = 0; l < c.rows(); ++l) {
      if (l == k) continue;
      const double diff = c(l, i) - c(l, j);
      others += diff * diff;
    }
    // ((x - a)^2 + others - d)^2 = (x^2 - 2a x + b)^2 with b = a^2 + others - d.
    const double b = a * a + others - obs.observed()(i, j);
    q.a[4] += 1.0;
    q.a[3] += -4.0 * a;
    q.a[2] += 4.0 * a * a + 2.0 * b;
    q.a[1] += -4.0 * a * b;
    q.a[0] += b * b;
  }
  return q;
}

}  // namespace

QuarticCoeffs quartic_coeffs(const NoisyObservation& obs, const PointSet& x, Index i,
                             Index k) {
  if (i < 0 || i >= x.size() || k < 0 || k >= x.dim() || x.size() != obs.size()) {
    throw std::invalid_argument("quartic_coeffs: index out of range");
  }
  return restricted_quartic(obs, x.coords(), i, k);
}

std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0) throw std::invalid_argument("cubic_real_roots: leading coefficient is zero");
  const double b = c2 / c3;
  const double c = c1 / c3;
  const double d = c0 / c3;
  // x = t - b/3 gives t^3 + p t + q = 0.
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  std::vector<double> roots;
  if (p == 0.0 && q == 0.0) {
    roots.push_back(-shift);
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    // Sum of cube roots, arranged to avoid cancellation.
    const double u = std::cbrt(-half_q + (half_q <= 0.0 ? sq : -sq));
    const double t = u == 0.0 ? 0.0 : u - third_p / u;
    roots.push_back(t - shift);
  } else {
    const double r = std::sqrt(-third_p);
    const double arg = std::clamp(-half_q / (r * r * r), -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
      roots.push_back(2.0 * r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) - shift);
    }
  }
  // Newton polish on the original polynomial.
  for (double& x : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((x + b) * x + c) * x + d;
      const double df = (3.0 * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      const double nx = x - f / df;
      if (!std::isfinite(nx)) break;
      const double f_new = ((nx + b) * nx + c) * nx + d;
      if (std::abs(f_new) >= std::abs(f)) break;
      x = nx;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::optional<double> minimize_quartic(const QuarticCoeffs& c) {
  if (!(c.a[4] > 0.0)) return std::nullopt;
  const std::vector<double> crit =
      cubic_real_roots(4.0 * c.a[4], 3.0 * c.a[3], 2.0 * c.a[2], c.a[1]);
  // Values closer than the rounding error of evaluating the polynomial count
  // as ties.
  double scale = 0.0;
  for (double x : crit) {
    double terms = 0.0;
    for (int l = 4; l >= 0; --l) terms = terms * std::abs(x) + std::abs(c.a[l]);
    scale = std::max(scale, terms);
  }
  const double tie = 1e-12 * scale;
  // Roots are ascending, so the first within the tie band is the smallest.
  double best_x = crit.front();
  double best_f = c(best_x);
  for (double x : crit) {
    const double f = c(x);
    if (f < best_f - tie) {
      best_f = f;
      best_x = x;
    }
  }
  return best_x;
}

CompletionResult alternating_descent(const NoisyObservation& obs, int dim,
                                     const DescentOptions& opts) {
  if (dim < 1) throw std::invalid_argument("alternating_descent: dim must be >= 1");
  const Index n = obs.size();
  Matrix coords;
  if (opts.warm_start) {
    if (opts.warm_start->size() != n || opts.warm_start->dim() != dim) {
      throw std::invalid_argument("alternating_descent: warm start has the wrong shape");
    }
    coords = opts.warm_start->coords();
  } else if (opts.init == DescentInit::random) {
    Rng rng(opts.seed);
    coords = gaussian_matrix(rng, dim, n);
  } else {
    coords = Matrix::Zero(dim, n);
  }

  CompletionResult result;
  double f = stress_s(PointSet(coords), obs);
  result.objective_trace.push_back(f);
  const double floor = 1e-30 * std::max(obs.observed().squaredNorm(), 1e-300);

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    result.iterations = sweep;
    if (f <= floor) {
      result.converged = true;
      break;
    }
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < dim; ++k) {
        const QuarticCoeffs q = restricted_quartic(obs, coords, i, k);
        const std::optional<double> best = minimize_quartic(q);
        if (best && q(*best) < q(coords(k, i))) coords(k, i) = *best;
      }
    }
    const double f_new = stress_s(PointSet(coords), obs);
    result.objective_trace.push_back(f_new);
    const double rel = (f - f_new) / std::max(f, 1e-300);
    f = f_new;
    if (rel < opts.tol) {
      result.converged = true;
      break;
    }
  }
  PointSet x(std::move(coords));
  result.edm = assemble_edm(x);
  result.points = std::move(x);
  return result;
}

}  // namespace edm

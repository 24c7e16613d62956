#pragma once

// EDM completion and denoising from a partially observed, possibly noisy
// squared-distance matrix: rank alternation, OptSpace, s-stress coordinate
// descent and a trace-maximizing semidefinite relaxation.

#include "edmkit/edm_core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace edm {

/// Observed squared distances with their mask. Unobserved entries are
/// stored as zero. Negative observations (possible under noise) are clamped
/// to zero and counted once per unordered pair.
class NoisyObservation {
 public:
  NoisyObservation(const Matrix& observed, ObservationMask mask);
  /// Complete, noiseless observation of an EDM.
  static NoisyObservation complete(const DistanceMatrix& d);

  Index size() const { return observed_.rows(); }
  const Matrix& observed() const { return observed_; }
  const ObservationMask& mask() const { return mask_; }
  int clamped_entries() const { return clamped_; }

 private:
  Matrix observed_;
  ObservationMask mask_;
  int clamped_ = 0;
};

struct CompletionResult {
  DistanceMatrix edm;
  std::optional<PointSet> points;
  int iterations = 0;
  std::vector<double> objective_trace;
  bool converged = false;
};

/// Sum over observed unordered pairs of (|x_i - x_j| - sqrt(d~_ij))^2.
double stress_raw(const PointSet& x, const NoisyObservation& obs);

/// Sum over observed unordered pairs of (|x_i - x_j|^2 - d~_ij)^2.
double stress_s(const PointSet& x, const NoisyObservation& obs);

// ---------------------------------------------------------------------------
// Rank alternation

struct RankOptions {
  int max_iter = 1000;
  /// Stop when |D_k - D_{k-1}|_F < tol * |D_{k-1}|_F.
  double tol = 1e-8;
  /// Value for unobserved entries at start; mean of observed entries when
  /// empty.
  std::optional<double> initial_fill;
};

/// Keeps the r eigenpairs of largest magnitude.
Matrix ev_threshold(const Matrix& symmetric, int rank);

/// Alternates a rank-(d+2) eigenvalue threshold with re-imposing observed
/// entries, a zero diagonal and nonnegativity. The objective trace records
/// the Frobenius gap between each thresholded iterate and its projection
/// back onto the constraints; it is non-increasing.
CompletionResult rank_complete_edm(const NoisyObservation& obs, int dim,
                                   const RankOptions& opts = {});

// ---------------------------------------------------------------------------
// OptSpace

struct OptSpaceOptions {
  int max_iter = 500;
  double tol = 1e-8;
  bool trim = true;
};

struct OptSpaceResult {
  Matrix left;    // m x r, orthonormal columns
  Matrix core;    // r x r
  Matrix right;   // n x r, orthonormal columns
  Matrix completed;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

/// Low-rank completion of a general m x n matrix. `mask` holds 0/1 entries
/// of the same shape. Throws on an empty mask or r > min(m, n).
OptSpaceResult optspace(const Matrix& observed, const Matrix& mask, int rank,
                        const OptSpaceOptions& opts = {});

/// OptSpace applied to an EDM with rank d+2; the zero diagonal is treated as
/// observed. The completed matrix is symmetrized, made hollow and clamped.
CompletionResult optspace_complete_edm(const NoisyObservation& obs, int dim,
                                       const OptSpaceOptions& opts = {});

// ---------------------------------------------------------------------------
// s-stress coordinate descent

/// f(x) = a[0] + a[1] x + a[2] x^2 + a[3] x^3 + a[4] x^4.
struct QuarticCoeffs {
  std::array<double, 5> a{};

  double operator()(double x) const {
    return (((a[4] * x + a[3]) * x + a[2]) * x + a[1]) * x + a[0];
  }
};

/// s-stress restricted to coordinate k of point i with every other variable
/// held fixed. Only pairs (i, j) enter; terms not involving point i are
/// dropped, so the polynomial equals stress_s up to a constant.
QuarticCoeffs quartic_coeffs(const NoisyObservation& obs, const PointSet& x, Index i,
                             Index k);

/// Global minimizer through the real roots of the cubic derivative. Ties
/// go to the smallest x. Returns nullopt when a[4] <= 0 (point without
/// observed neighbours), in which case the caller keeps its coordinate.
std::optional<double> minimize_quartic(const QuarticCoeffs& c);

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0), ascending.
std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0);

enum class DescentInit { zero, random };

struct DescentOptions {
  int max_sweeps = 200;
  /// Stop when the relative decrease of s-stress over a sweep is < tol.
  double tol = 1e-8;
  DescentInit init = DescentInit::zero;
  std::uint64_t seed = 0;
  /// Overrides `init` when set.
  std::optional<PointSet> warm_start;
};

/// Cyclic coordinate descent on s-stress. Each coordinate update replaces
/// x_{i,k} by the global minimizer of its restricted quartic, so s-stress
/// never increases. The trace holds s-stress after every sweep (entry 0 is
/// the initial value).
CompletionResult alternating_descent(const NoisyObservation& obs, int dim,
                                     const DescentOptions& opts = {});

// ---------------------------------------------------------------------------
// Semidefinite relaxation

struct SdrOptions {
  /// Weight of the data term; sqrt(#missing unordered pairs) when empty.
  std::optional<double> lambda;
  int max_iter = 30000;
  /// Stop when the relative objective change over an iteration is < tol.
  double tol = 1e-11;
  /// The squared data term is weighted so that its gradient matches the
  /// unsquared one at this relative residual.
  double target_residual = 1e-6;
  /// trace(H) <= trace_cap_factor * n * max observed entry.
  double trace_cap_factor = 10.0;
};

/// Maximizes trace(H) against a squared data-fit penalty over the PSD cone
/// in the reduced (n-1)-dimensional basis; accelerated projected gradient
/// with backtracking. Returns D = K(V H V^T) and the top-d embedding of
/// V H V^T. The objective trace records the minimized objective
/// (penalty - trace).
CompletionResult sdr_complete_edm(const NoisyObservation& obs, int dim,
                                  const SdrOptions& opts = {});

/// The value lambda' used for the squared data term given the user-facing
/// lambda: lambda / (2 * target_residual * |W o D~|_F).
double sdr_squared_weight(const NoisyObservation& obs, double lambda,
                          double target_residual);

}  // namespace edm

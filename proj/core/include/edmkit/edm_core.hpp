#pragma once

// Core EDM types and the formulas that connect point sets, Gram matrices and
// squared-distance matrices.
//
// Convention: every DistanceMatrix stores SQUARED distances,
// d_ij = |x_i - x_j|^2. Conversions to plain distances happen at I/O
// boundaries only.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace edm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative PSD tolerance: a symmetric matrix is accepted as PSD when
/// lambda_min >= -kPsdTolerance * |lambda|_max.
inline constexpr double kPsdTolerance = 1e-8;

/// Threshold used by the PSD checks for a spectrum whose largest magnitude
/// is `max_abs_eigenvalue`.
double psd_threshold(double max_abs_eigenvalue, double tol = kPsdTolerance);

/// d x n coordinates, one point per column.
class PointSet {
 public:
  explicit PointSet(Matrix coords);

  Index dim() const { return coords_.rows(); }
  Index size() const { return coords_.cols(); }
  const Matrix& coords() const { return coords_; }
  Eigen::VectorXd point(Index i) const { return coords_.col(i); }

 private:
  Matrix coords_;
};

/// Symmetric, hollow, nonnegative matrix of squared distances.
///
/// Construction symmetrizes the input as (M + M^T)/2 and zeroes the
/// diagonal. Entries that are negative only by rounding (within 1e-10 of the
/// largest magnitude) are set to zero; anything more negative is rejected.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(const Matrix& entries);

  Index size() const { return d_.rows(); }
  const Matrix& entries() const { return d_; }
  double operator()(Index i, Index j) const { return d_(i, j); }

 private:
  Matrix d_;
};

/// Symmetric Gram matrix. PSD-ness is checked on demand, not enforced.
class GramMatrix {
 public:
  explicit GramMatrix(const Matrix& entries);

  Index size() const { return g_.rows(); }
  const Matrix& entries() const { return g_; }
  double min_eigenvalue() const;
  bool is_psd(double tol = kPsdTolerance) const;

 private:
  Matrix g_;
};

/// Binary symmetric mask of observed entries. The diagonal is never an
/// observation (it is known to be zero) and is forced to 0.
class ObservationMask {
 public:
  explicit ObservationMask(const Matrix& entries);
  static ObservationMask full(Index n);

  Index size() const { return w_.rows(); }
  const Matrix& entries() const { return w_; }
  bool observed(Index i, Index j) const { return w_(i, j) != 0.0; }
  /// Number of observed unordered pairs i < j.
  Index observed_pairs() const;
  /// Number of unobserved unordered pairs i < j.
  Index missing_pairs() const;

 private:
  Matrix w_;
};

/// The (n-1) x (n-1) matrix H = -1/2 V^T D V in the fixed basis V.
class ReducedGram {
 public:
  explicit ReducedGram(const Matrix& entries);

  /// Size of the EDM this matrix parametrizes (rows + 1).
  Index edm_size() const { return h_.rows() + 1; }
  const Matrix& entries() const { return h_; }
  double min_eigenvalue() const;

 private:
  Matrix h_;
};

enum class CenteringMode { first_point, centroid };

DistanceMatrix assemble_edm(const PointSet& points);

/// Rectangular matrix of squared distances |a_i - b_j|^2.
Matrix cross_edm(const PointSet& points_a, const PointSet& points_b);

GramMatrix gram_from_edm(const DistanceMatrix& d,
                         CenteringMode mode = CenteringMode::centroid);

/// K(G) = diag(G) 1^T - 2G + 1 diag(G)^T. Negative entries, which only arise
/// for non-PSD input, are clamped to zero.
DistanceMatrix edm_from_gram(const GramMatrix& g);

/// J = I - (1/n) 1 1^T.
Matrix centering_matrix(Index n);

/// Orthonormal basis of the complement of the all-ones vector, n x (n-1),
/// with first row -1/sqrt(n) and the rest -1/(n + sqrt(n)) plus I.
Matrix v_basis(Index n);

ReducedGram reduced_gram(const DistanceMatrix& d);
DistanceMatrix edm_from_reduced(const ReducedGram& h);

struct EdmCheck {
  bool is_edm = false;
  double min_eigenvalue = 0.0;
};

/// Gower's test on -1/2 J D J: accepted when
/// lambda_min >= -tol * |lambda|_max.
EdmCheck is_edm(const DistanceMatrix& d, double tol = kPsdTolerance);

/// Count of eigenvalues with |lambda| > rel_tol * max |lambda|. M must be
/// symmetric; zero matrices have rank 0.
int numerical_rank(const Matrix& m, double rel_tol = 1e-9);

/// Symmetric eigendecomposition with eigenvalues sorted by decreasing
/// magnitude.
struct SortedEigen {
  Vector values;
  Matrix vectors;
};
SortedEigen eigen_by_magnitude(const Matrix& symmetric);

/// Relative Frobenius error |estimate - truth|_F / |truth|_F.
double relative_error(const Matrix& estimate, const Matrix& truth);

}  // namespace edm

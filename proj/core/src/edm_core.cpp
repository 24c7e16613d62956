#include "edmkit/edm_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace edm {

namespace {

Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("expected a square matrix, got " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
  return 0.5 * (m + m.transpose());
}

double min_sym_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

double psd_threshold(double max_abs_eigenvalue, double tol) {
  return -tol * std::abs(max_abs_eigenvalue);
}

PointSet::PointSet(Matrix coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1 || coords_.cols() < 1) {
    throw std::invalid_argument("PointSet needs d >= 1 and n >= 1");
  }
  if (!coords_.allFinite()) {
    throw std::invalid_argument("PointSet has non-finite coordinates");
  }
}

DistanceMatrix::DistanceMatrix(const Matrix& entries) : d_(symmetrized(entries)) {
  d_.diagonal().setZero();
  const double scale = d_.size() == 0 ? 0.0 : d_.cwiseAbs().maxCoeff();
  const double slack = 1e-10 * scale;
  for (Index j = 0; j < d_.cols(); ++j) {
    for (Index i = 0; i < d_.rows(); ++i) {
      if (d_(i, j) < 0.0) {
        if (d_(i, j) < -slack) {
          throw std::invalid_argument("distance matrix has negative entry at (" +
                                      std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
        d_(i, j) = 0.0;
      }
    }
  }
}

GramMatrix::GramMatrix(const Matrix& entries) : g_(symmetrized(entries)) {}

double GramMatrix::min_eigenvalue() const { return min_sym_eigenvalue(g_); }

bool GramMatrix::is_psd(double tol) const {
  if (g_.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double max_abs = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= psd_threshold(max_abs, tol);
}

ObservationMask::ObservationMask(const Matrix& entries) : w_(symmetrized(entries)) {
  for (Index j = 0; j < w_.cols(); ++j) {
    for (Index i = 0; i < w_.rows(); ++i) {
      const double v = w_(i, j);
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("mask entries must be 0 or 1 and symmetric");
      }
    }
  }
  w_.diagonal().setZero();
}

ObservationMask ObservationMask::full(Index n) {
  return ObservationMask(Matrix::Ones(n, n));
}

Index ObservationMask::observed_pairs() const {
  return static_cast<Index>(std::llround(w_.sum() / 2.0));
}

Index ObservationMask::missing_pairs() const {
  const Index n = w_.rows();
  return n * (n - 1) / 2 - observed_pairs();
}

ReducedGram::ReducedGram(const Matrix& entries) : h_(symmetrized(entries)) {}

double ReducedGram::min_eigenvalue() const { return min_sym_eigenvalue(h_); }

DistanceMatrix assemble_edm(const PointSet& points) {
  const Matrix& x = points.coords();
  const Index n = points.size();
  Matrix d(n, n);
  for (Index j = 0; j < n; ++j) {
    d(j, j) = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      const double v = (x.col(i) - x.col(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return DistanceMatrix(d);
}

Matrix cross_edm(const PointSet& points_a, const PointSet& points_b) {
  if (points_a.dim() != points_b.dim()) {
    throw std::invalid_argument("cross_edm: dimension mismatch (" +
                                std::to_string(points_a.dim()) + " vs " +
                                std::to_string(points_b.dim()) + ")");
  }
  const Matrix& a = points_a.coords();
  const Matrix& b = points_b.coords();
  Matrix out(a.cols(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < a.cols(); ++i) {
      out(i, j) = (a.col(i) - b.col(j)).squaredNorm();
    }
  }
  return out;
}

GramMatrix gram_from_edm(const DistanceMatrix& d, CenteringMode mode) {
  const Matrix& dm = d.entries();
  const Index n = d.size();
  if (mode == CenteringMode::first_point) {
    const Vector d1 = dm.col(0);
    const Vector ones = Vector::Ones(n);
    return GramMatrix(-0.5 * (dm - ones * d1.transpose() - d1 * ones.transpose()));
  }
  // J D J without forming J: subtract row and column means, add back the
  // grand mean.
  const Vector row_mean = dm.rowwise().mean();
  const Vector col_mean = dm.colwise().mean().transpose();
  const double grand = dm.mean();
  Matrix g = dm;
  g.colwise() -= row_mean;
  g.rowwise() -= col_mean.transpose();
  g.array() += grand;
  return GramMatrix(-0.5 * g);
}

DistanceMatrix edm_from_gram(const GramMatrix& g) {
  const Matrix& gm = g.entries();
  const Vector diag = gm.diagonal();
  const Index n = gm.rows();
  Matrix d = diag * Vector::Ones(n).transpose() - 2.0 * gm +
             Vector::Ones(n) * diag.transpose();
  d = d.cwiseMax(0.0);
  return DistanceMatrix(d);
}

Matrix centering_matrix(Index n) {
  if (n < 1) throw std::invalid_argument("centering_matrix: n must be >= 1");
  return Matrix::Identity(n, n) -
         Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

Matrix v_basis(Index n) {
  if (n < 2) throw std::invalid_argument("v_basis: n must be >= 2");
  const double rn = std::sqrt(static_cast<double>(n));
  const double first_row = -1.0 / rn;
  const double rest = -1.0 / (static_cast<double>(n) + rn);
  Matrix v(n, n - 1);
  v.row(0).setConstant(first_row);
  v.bottomRows(n - 1).setConstant(rest);
  v.bottomRows(n - 1).diagonal().array() += 1.0;
  return v;
}

ReducedGram reduced_gram(const DistanceMatrix& d) {
  const Matrix v = v_basis(d.size());
  return ReducedGram(-0.5 * v.transpose() * d.entries() * v);
}

DistanceMatrix edm_from_reduced(const ReducedGram& h) {
  const Matrix v = v_basis(h.edm_size());
  return edm_from_gram(GramMatrix(v * h.entries() * v.transpose()));
}

EdmCheck is_edm(const DistanceMatrix& d, double tol) {
  const GramMatrix g = gram_from_edm(d, CenteringMode::centroid);
  if (g.size() == 0) return {true, 0.0};
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.entries(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double max_abs = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return {ev(0) >= psd_threshold(max_abs, tol), ev(0)};
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
  const Vector abs_ev = es.eigenvalues().cwiseAbs();
  const double max_abs = abs_ev.maxCoeff();
  if (max_abs == 0.0) return 0;
  return static_cast<int>((abs_ev.array() > rel_tol * max_abs).count());
}

SortedEigen eigen_by_magnitude(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  const Vector& ev = es.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(ev.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(ev(a)) > std::abs(ev(b));
  });
  SortedEigen out{Vector(ev.size()), Matrix(symmetric.rows(), ev.size())};
  for (Index k = 0; k < ev.size(); ++k) {
    out.values(k) = ev(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double relative_error(const Matrix& estimate, const Matrix& truth) {
  const double denom = truth.norm();
  const double num = (estimate - truth).norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

}  // namespace edm

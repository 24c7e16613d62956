#include "edmkit/completion.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace edm {

namespace {

struct Entry {
  Index row;
  Index col;
  double value;
};

std::vector<Entry> observed_entries(const Matrix& observed, const Matrix& mask) {
  std::vector<Entry> out;
  for (Index j = 0; j < mask.cols(); ++j)
    for (Index i = 0; i < mask.rows(); ++i)
      if (mask(i, j) != 0.0) out.push_back({i, j, observed(i, j)});
  return out;
}

// Orthonormal basis of span(m) with a positive R diagonal, so the columns
// stay close to the input columns.
Matrix orthonormalize(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  for (Index k = 0; k < m.cols(); ++k) {
    if (qr.matrixQR()(k, k) < 0.0) q.col(k) *= -1.0;
  }
  return q;
}

double cost(const std::vector<Entry>& entries, const Matrix& a, const Matrix& s,
            const Matrix& b) {
  const Matrix as = a * s;
  double total = 0.0;
  for (const Entry& e : entries) {
    const double r = as.row(e.row).dot(b.row(e.col)) - e.value;
    total += r * r;
  }
  return 0.5 * total;
}

// argmin_S sum over observed (i,j) of (M_ij - a_i^T S b_j)^2: linear least
// squares in vec(S), solved through the r^2 x r^2 normal equations.
Matrix solve_core(const std::vector<Entry>& entries, const Matrix& a, const Matrix& b) {
  const Index r = a.cols();
  const Index r2 = r * r;
  Matrix normal = Matrix::Zero(r2, r2);
  Vector rhs = Vector::Zero(r2);
  Vector row(r2);
  for (const Entry& e : entries) {
    // vec(S) is column-major: S(p, q) sits at q * r + p.
    for (Index q = 0; q < r; ++q)
      for (Index p = 0; p < r; ++p) row(q * r + p) = a(e.row, p) * b(e.col, q);
    normal.selfadjointView<Eigen::Lower>().rankUpdate(row);
    rhs += e.value * row;
  }
  normal.triangularView<Eigen::Upper>() = normal.transpose();
  // Tiny ridge keeps the system solvable when the mask leaves S partially
  // undetermined.
  const double ridge = 1e-12 * std::max(1.0, normal.diagonal().maxCoeff());
  normal.diagonal().array() += ridge;
  const Vector vec_s = normal.ldlt().solve(rhs);
  return Eigen::Map<const Matrix>(vec_s.data(), r, r);
}

}  // namespace

OptSpaceResult optspace(const Matrix& observed, const Matrix& mask, int rank,
                        const OptSpaceOptions& opts) {
  const Index m = observed.rows();
  const Index n = observed.cols();
  if (mask.rows() != m || mask.cols() != n) {
    throw std::invalid_argument("optspace: mask shape differs from observed matrix");
  }
  if (rank < 1 || rank > std::min(m, n)) {
    throw std::invalid_argument("optspace: rank must be in [1, min(m, n)]");
  }
  const std::vector<Entry> entries = observed_entries(observed, mask);
  if (entries.empty()) throw std::invalid_argument("optspace: mask has no observed entries");

  const double n_obs = static_cast<double>(entries.size());
  const double alpha = n_obs / static_cast<double>(m * n);

  // Trim: drop rows/columns holding more than twice the average number of
  // observations, for the spectral initialization only.
  Matrix trimmed = mask.cwiseProduct(observed);
  const Vector row_deg = mask.rowwise().sum();
  const Vector col_deg = mask.colwise().sum().transpose();
  if (opts.trim) {
    const double row_avg = n_obs / static_cast<double>(m);
    const double col_avg = n_obs / static_cast<double>(n);
    for (Index i = 0; i < m; ++i)
      if (row_deg(i) > 2.0 * row_avg) trimmed.row(i).setZero();
    for (Index j = 0; j < n; ++j)
      if (col_deg(j) > 2.0 * col_avg) trimmed.col(j).setZero();
  }

  Eigen::JacobiSVD<Matrix> svd(trimmed / alpha, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix a = svd.matrixU().leftCols(rank);
  Matrix b = svd.matrixV().leftCols(rank);
  Matrix s = solve_core(entries, a, b);

  OptSpaceResult result;
  double f = cost(entries, a, s, b);
  result.objective_trace.push_back(f);
  const double data_scale = 0.5 * observed.cwiseProduct(mask).squaredNorm();
  double step = 1.0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    result.iterations = it;
    if (f <= 1e-28 * std::max(data_scale, 1e-300)) {
      result.converged = true;
      break;
    }
    // Residual on observed entries as a sparse-by-mask dense matrix.
    Matrix resid = Matrix::Zero(m, n);
    const Matrix as = a * s;
    for (const Entry& e : entries) {
      resid(e.row, e.col) = as.row(e.row).dot(b.row(e.col)) - e.value;
    }
    Matrix grad_a = resid * b * s.transpose();
    Matrix grad_b = resid.transpose() * a * s;
    // Tangent space of the Grassmannian.
    grad_a -= a * (a.transpose() * grad_a);
    grad_b -= b * (b.transpose() * grad_b);
    // Scale by the inverse core Gram matrices so ill-conditioned S does not
    // stall the descent.
    const double eps = 1e-10 * std::max(s.squaredNorm(), 1e-300);
    const Matrix ident = Matrix::Identity(s.rows(), s.rows());
    const Matrix dir_a = (s * s.transpose() + eps * ident).ldlt().solve(grad_a.transpose()).transpose();
    const Matrix dir_b = (s.transpose() * s + eps * ident).ldlt().solve(grad_b.transpose()).transpose();
    const double g2 = (grad_a.cwiseProduct(dir_a)).sum() + (grad_b.cwiseProduct(dir_b)).sum();
    if (!(g2 > 0.0)) {
      result.converged = true;
      break;
    }

    step *= 2.0;
    Matrix a_next, b_next;
    double f_next = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      a_next = orthonormalize(a - step * dir_a);
      b_next = orthonormalize(b - step * dir_b);
      f_next = cost(entries, a_next, s, b_next);
      if (f_next <= f - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.converged = true;  // no descent direction left at working precision
      break;
    }
    a = std::move(a_next);
    b = std::move(b_next);
    s = solve_core(entries, a, b);
    const double f_new = std::min(f_next, cost(entries, a, s, b));
    result.objective_trace.push_back(f_new);
    const double rel = (f - f_new) / std::max(f, 1e-300);
    f = f_new;
    if (rel < opts.tol) {
      result.converged = true;
      break;
    }
  }

  result.left = a;
  result.core = s;
  result.right = b;
  result.completed = a * s * b.transpose();
  return result;
}

CompletionResult optspace_complete_edm(const NoisyObservation& obs, int dim,
                                       const OptSpaceOptions& opts) {
  const Index n = obs.size();
  Matrix mask = obs.mask().entries();
  mask.diagonal().setOnes();
  OptSpaceResult os = optspace(obs.observed(), mask, std::min<Index>(dim + 2, n), opts);
  Matrix d = 0.5 * (os.completed + os.completed.transpose());
  d.diagonal().setZero();
  d = d.cwiseMax(0.0);
  CompletionResult result;
  result.edm = DistanceMatrix(d);
  result.iterations = os.iterations;
  result.objective_trace = std::move(os.objective_trace);
  result.converged = os.converged;
  return result;
}

}  // namespace edm

#include "edmkit/completion.hpp"

#include <stdexcept>

namespace edm {

Matrix ev_threshold(const Matrix& symmetric, int rank) {
  const SortedEigen eig = eigen_by_magnitude(symmetric);
  const Index r = std::min<Index>(rank, eig.values.size());
  const Matrix u = eig.vectors.leftCols(r);
  return u * eig.values.head(r).asDiagonal() * u.transpose();
}

CompletionResult rank_complete_edm(const NoisyObservation& obs, int dim,
                                   const RankOptions& opts) {
  if (dim < 1) throw std::invalid_argument("rank_complete_edm: dim must be >= 1");
  const Index n = obs.size();
  const Matrix& w = obs.mask().entries();
  const Matrix& observed = obs.observed();
  const Index n_obs = 2 * obs.mask().observed_pairs();

  double fill = 0.0;
  if (opts.initial_fill) {
    fill = *opts.initial_fill;
  } else if (n_obs > 0) {
    fill = observed.sum() / static_cast<double>(n_obs);
  }

  // Projection onto {D : D_W = D~_W, diag(D) = 0, D >= 0}.
  auto project = [&](const Matrix& m) {
    Matrix out = (w.array() != 0.0).select(observed, m.cwiseMax(0.0));
    out.diagonal().setZero();
    return out;
  };

  Matrix d = (w.array() != 0.0).select(observed, Matrix::Constant(n, n, fill));
  d.diagonal().setZero();

  CompletionResult result;
  const int rank = dim + 2;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Matrix low_rank = ev_threshold(d, rank);
    Matrix next = project(low_rank);
    result.objective_trace.push_back((next - low_rank).norm());
    const double change = (next - d).norm();
    const double scale = d.norm();
    d = std::move(next);
    result.iterations = it;
    if (change <= opts.tol * scale) {
      result.converged = true;
      break;
    }
  }
  result.edm = DistanceMatrix(d);
  return result;
}

}  // namespace edm

#include "edmkit/completion.hpp"
#include "edmkit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace edm {

namespace {

// K(G) = diag(G) 1^T + 1 diag(G)^T - 2 G.
Matrix k_map(const Matrix& g) {
  const Vector diag = g.diagonal();
  Matrix out = -2.0 * g;
  out.colwise() += diag;
  out.rowwise() += diag.transpose();
  return out;
}

// Adjoint of K for symmetric R: Diag(2 R 1) - 2 R.
Matrix k_adjoint(const Matrix& r) {
  Matrix out = -2.0 * r;
  out.diagonal() += 2.0 * r.rowwise().sum();
  return out;
}

// Euclidean projection of the eigenvalues onto {w >= 0, sum(w) <= cap}.
Vector project_spectrum(Vector w, double cap) {
  w = w.cwiseMax(0.0);
  if (w.sum() <= cap) return w;
  std::vector<double> sorted(w.data(), w.data() + w.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - cap) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (w.array() - theta).cwiseMax(0.0);
}

Matrix project_psd_capped(const Matrix& h, double cap) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.transpose()));
  const Vector w = project_spectrum(es.eigenvalues(), cap);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

class SdrProblem {
 public:
  SdrProblem(const NoisyObservation& obs, double weight)
      : v_(v_basis(obs.size())), w_(obs.mask().entries()), data_(obs.observed()),
        weight_(weight) {}

  Index reduced_size() const { return v_.cols(); }

  Matrix residual(const Matrix& h) const {
    return w_.cwiseProduct(k_map(v_ * h * v_.transpose()) - data_);
  }

  double objective(const Matrix& h) const {
    return weight_ * residual(h).squaredNorm() - h.trace();
  }

  double objective_and_gradient(const Matrix& h, Matrix& grad) const {
    const Matrix r = residual(h);
    grad = v_.transpose() * (2.0 * weight_ * k_adjoint(r)) * v_;
    grad.diagonal().array() -= 1.0;
    return weight_ * r.squaredNorm() - h.trace();
  }

  const Matrix& basis() const { return v_; }

 private:
  Matrix v_;
  Matrix w_;
  Matrix data_;
  double weight_;
};

}  // namespace

double sdr_squared_weight(const NoisyObservation& obs, double lambda,
                          double target_residual) {
  double data_norm = obs.observed().norm();
  if (data_norm == 0.0) data_norm = 1.0;
  return lambda / (2.0 * target_residual * data_norm);
}

CompletionResult sdr_complete_edm(const NoisyObservation& obs, int dim,
                                  const SdrOptions& opts) {
  const Index n = obs.size();
  if (n < 2) throw std::invalid_argument("sdr_complete_edm: need n >= 2");
  if (dim < 1 || dim > n - 1) throw std::invalid_argument("sdr_complete_edm: dim out of range");
  const double lambda =
      opts.lambda ? *opts.lambda
                  : std::max(1.0, std::sqrt(static_cast<double>(obs.mask().missing_pairs())));
  if (!(lambda > 0.0)) throw std::invalid_argument("sdr_complete_edm: lambda must be > 0");

  const SdrProblem problem(obs, sdr_squared_weight(obs, lambda, opts.target_residual));
  const double max_obs = obs.observed().size() > 0 ? obs.observed().maxCoeff() : 0.0;
  const double cap = opts.trace_cap_factor * static_cast<double>(n) * max_obs;
  const Index m = problem.reduced_size();

  CompletionResult result;
  Matrix h = Matrix::Zero(m, m);
  Matrix y = h;
  Matrix grad(m, m);
  double f = problem.objective(h);
  result.objective_trace.push_back(f);
  double lipschitz = 1.0;
  double momentum = 1.0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    result.iterations = it;
    const double f_y = problem.objective_and_gradient(y, grad);
    Matrix h_next;
    double f_next = 0.0;
    for (int ls = 0; ls < 100; ++ls) {
      h_next = project_psd_capped(y - grad / lipschitz, cap);
      const Matrix step = h_next - y;
      f_next = problem.objective(h_next);
      const double model = f_y + grad.cwiseProduct(step).sum() +
                           0.5 * lipschitz * step.squaredNorm();
      if (f_next <= model + 1e-15 * std::abs(f_y)) break;
      lipschitz *= 2.0;
    }
    if (f_next > f) {
      // Momentum overshoot: restart from the last accepted iterate.
      momentum = 1.0;
      y = h;
      continue;
    }
    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = h_next + ((momentum - 1.0) / momentum_next) * (h_next - h);
    const double change = std::abs(f - f_next);
    h = std::move(h_next);
    result.objective_trace.push_back(f_next);
    const bool small = change < opts.tol * std::max(1.0, std::abs(f));
    f = f_next;
    momentum = momentum_next;
    lipschitz *= 0.9;
    if (small && it > 10) {
      result.converged = true;
      break;
    }
  }

  const Matrix gram = problem.basis() * h * problem.basis().transpose();
  result.edm = edm_from_gram(GramMatrix(gram));
  result.points = embed_gram(gram, dim).points;
  return result;
}

}  // namespace edm

#include "edmkit/unfolding.hpp"

#include "edmkit/embedding.hpp"

#include <stdexcept>
#include <string>

namespace edm {

UnfoldingInstance::UnfoldingInstance(Matrix cross_distances) : delta_(std::move(cross_distances)) {
  if (delta_.rows() < 1 || delta_.cols() < 1) {
    throw std::invalid_argument("UnfoldingInstance needs m, k >= 1");
  }
  if (!delta_.allFinite() || delta_.minCoeff() < 0.0) {
    throw std::invalid_argument("UnfoldingInstance: cross distances must be finite and >= 0");
  }
}

CompletionMethod parse_method(const std::string& name) {
  if (name == "rank") return CompletionMethod::rank;
  if (name == "optspace") return CompletionMethod::optspace;
  if (name == "sstress") return CompletionMethod::sstress;
  if (name == "sdr") return CompletionMethod::sdr;
  throw std::invalid_argument("unknown completion method '" + name + "'");
}

std::string method_name(CompletionMethod method) {
  switch (method) {
    case CompletionMethod::rank: return "rank";
    case CompletionMethod::optspace: return "optspace";
    case CompletionMethod::sstress: return "sstress";
    case CompletionMethod::sdr: return "sdr";
  }
  return "unknown";
}

ObservationMask mdu_mask(Index m, Index k) {
  if (m < 1 || k < 1) throw std::invalid_argument("mdu_mask: m, k must be >= 1");
  Matrix w = Matrix::Zero(m + k, m + k);
  w.topRightCorner(m, k).setOnes();
  w.bottomLeftCorner(k, m).setOnes();
  return ObservationMask(w);
}

double mdu_missing_fraction(Index m, Index k) {
  const double mm = static_cast<double>(m);
  const double kk = static_cast<double>(k);
  return (mm * mm + kk * kk) / ((mm + kk) * (mm + kk));
}

NoisyObservation embed_unfolding(const UnfoldingInstance& inst) {
  const Index m = inst.microphones();
  const Index k = inst.sources();
  Matrix d = Matrix::Zero(m + k, m + k);
  d.topRightCorner(m, k) = inst.cross_distances();
  d.bottomLeftCorner(k, m) = inst.cross_distances().transpose();
  return NoisyObservation(d, mdu_mask(m, k));
}

CompletionResult complete_edm(const NoisyObservation& obs, int dim, CompletionMethod method,
                              const CompletionOptions& opts) {
  switch (method) {
    case CompletionMethod::rank: return rank_complete_edm(obs, dim, opts.rank);
    case CompletionMethod::optspace: return optspace_complete_edm(obs, dim, opts.optspace);
    case CompletionMethod::sstress: return alternating_descent(obs, dim, opts.descent);
    case CompletionMethod::sdr: return sdr_complete_edm(obs, dim, opts.sdr);
  }
  throw std::invalid_argument("complete_edm: unknown method");
}

UnfoldingResult solve_mdu(const UnfoldingInstance& inst, int dim, CompletionMethod method,
                          const CompletionOptions& opts) {
  if (dim < 1) throw std::invalid_argument("solve_mdu: dim must be >= 1");
  const Index m = inst.microphones();
  const Index k = inst.sources();
  const CompletionResult completed = complete_edm(embed_unfolding(inst), dim, method, opts);
  const int embed_dim = static_cast<int>(std::min<Index>(dim, m + k - 1));
  const PointSet all = classical_mds(completed.edm, embed_dim);
  Matrix coords = Matrix::Zero(dim, m + k);
  coords.topRows(embed_dim) = all.coords();
  return UnfoldingResult{PointSet(coords.leftCols(m)), PointSet(coords.rightCols(k)),
                         completed.edm, completed.converged, completed.iterations};
}

}  // namespace edm

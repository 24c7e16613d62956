#include "edmkit/completion.hpp"

#include <cmath>
#include <stdexcept>

namespace edm {

NoisyObservation::NoisyObservation(const Matrix& observed, ObservationMask mask)
    : mask_(std::move(mask)) {
  if (observed.rows() != observed.cols() || observed.rows() != mask_.size()) {
    throw std::invalid_argument("NoisyObservation: observed matrix and mask sizes differ");
  }
  if (!observed.allFinite()) {
    throw std::invalid_argument("NoisyObservation: non-finite observations");
  }
  const Matrix& w = mask_.entries();
  observed_ = (0.5 * (observed + observed.transpose())).cwiseProduct(w);
  for (Index j = 0; j < observed_.cols(); ++j) {
    for (Index i = 0; i < observed_.rows(); ++i) {
      if (observed_(i, j) < 0.0) {
        observed_(i, j) = 0.0;
        if (i < j) ++clamped_;
      }
    }
  }
}

NoisyObservation NoisyObservation::complete(const DistanceMatrix& d) {
  return NoisyObservation(d.entries(), ObservationMask::full(d.size()));
}

namespace {

void check_sizes(const PointSet& x, const NoisyObservation& obs) {
  if (x.size() != obs.size()) {
    throw std::invalid_argument("stress: point count differs from observation size");
  }
}

}  // namespace

double stress_raw(const PointSet& x, const NoisyObservation& obs) {
  check_sizes(x, obs);
  const Matrix& c = x.coords();
  double total = 0.0;
  for (Index j = 0; j < obs.size(); ++j) {
    for (Index i = 0; i < j; ++i) {
      if (!obs.mask().observed(i, j)) continue;
      const double r = (c.col(i) - c.col(j)).norm() - std::sqrt(obs.observed()(i, j));
      total += r * r;
    }
  }
  return total;
}

double stress_s(const PointSet& x, const NoisyObservation& obs) {
  check_sizes(x, obs);
  const Matrix& c = x.coords();
  double total = 0.0;
  for (Index j = 0; j < obs.size(); ++j) {
    for (Index i = 0; i < j; ++i) {
      if (!obs.mask().observed(i, j)) continue;
      const double r = (c.col(i) - c.col(j)).squaredNorm() - obs.observed()(i, j);
      total += r * r;
    }
  }
  return total;
}

}  // namespace edm

#include "edmkit/unlabeled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edm {

namespace {

class TurnpikeSearch {
 public:
  TurnpikeSearch(std::size_t n, double tol) : n_(n), tol_(tol), matched_(Matrix::Zero(n, n)) {}

  void run(std::vector<double> pool) {
    const double width = pool.back();
    pool.pop_back();
    width_ = width;
    placed_ = {0.0, width};
    matched_(0, 1) = matched_(1, 0) = width;
    recurse(pool);
  }

  std::vector<std::vector<double>> take_solutions() { return std::move(solutions_); }

 private:
  // Removes the pool entry closest to target if it lies within tolerance.
  // Fills `value` with the removed entry.
  bool take(std::vector<double>& pool, double target, double& value) const {
    auto it = std::lower_bound(pool.begin(), pool.end(), target - tol_);
    auto best = pool.end();
    for (; it != pool.end() && *it <= target + tol_; ++it) {
      if (best == pool.end() || std::abs(*it - target) < std::abs(*best - target)) best = it;
    }
    if (best == pool.end()) return false;
    value = *best;
    pool.erase(best);
    return true;
  }

  bool partial_ok(std::size_t count) const {
    if (count < 3) return true;
    const auto k = static_cast<Index>(count);
    const Matrix sq = matched_.topLeftCorner(k, k).cwiseAbs2();
    const DistanceMatrix d(sq);
    if (!is_edm(d).is_edm) return false;
    if (numerical_rank(d.entries()) > 3) return false;
    return numerical_rank(gram_from_edm(d, CenteringMode::centroid).entries()) <= 1;
  }

  void record() {
    std::vector<double> sol = canonical_line_set(placed_);
    for (const auto& existing : solutions_) {
      bool same = true;
      for (std::size_t i = 0; i < sol.size() && same; ++i) {
        same = std::abs(existing[i] - sol[i]) <= tol_;
      }
      if (same) return;
    }
    solutions_.push_back(std::move(sol));
  }

  void recurse(const std::vector<double>& pool) {
    if (pool.empty()) {
      if (placed_.size() == n_) record();
      return;
    }
    const double y = pool.back();
    std::vector<double> positions{y};
    if (std::abs(width_ - 2.0 * y) > tol_) positions.push_back(width_ - y);

    const std::size_t slot = placed_.size();
    for (double p : positions) {
      std::vector<double> rest = pool;
      bool ok = true;
      for (std::size_t j = 0; j < slot && ok; ++j) {
        double value = 0.0;
        ok = take(rest, std::abs(p - placed_[j]), value);
        if (ok) {
          matched_(static_cast<Index>(slot), static_cast<Index>(j)) = value;
          matched_(static_cast<Index>(j), static_cast<Index>(slot)) = value;
        }
      }
      if (!ok) continue;
      placed_.push_back(p);
      if (partial_ok(placed_.size())) recurse(rest);
      placed_.pop_back();
    }
  }

  std::size_t n_;
  double tol_;
  double width_ = 0.0;
  std::vector<double> placed_;
  Matrix matched_;
  std::vector<std::vector<double>> solutions_;
};

}  // namespace

DistanceMultiset::DistanceMultiset(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("DistanceMultiset: distances must be finite and >= 0");
    }
  }
  const std::size_t size = values_.size();
  std::size_t n = 1;
  while (n * (n - 1) / 2 < size) ++n;
  if (n * (n - 1) / 2 != size) {
    throw std::invalid_argument("DistanceMultiset: size " + std::to_string(size) +
                                " is not n(n-1)/2 for any n");
  }
  points_ = n;
}

std::vector<double> canonical_line_set(std::vector<double> points) {
  if (points.empty()) return points;
  std::sort(points.begin(), points.end());
  const double lo = points.front();
  const double hi = points.back();
  std::vector<double> shifted;
  std::vector<double> mirrored;
  for (double p : points) shifted.push_back(p - lo);
  for (auto it = points.rbegin(); it != points.rend(); ++it) mirrored.push_back(hi - *it);
  return std::lexicographical_compare(mirrored.begin(), mirrored.end(), shifted.begin(),
                                      shifted.end())
             ? mirrored
             : shifted;
}

std::vector<std::vector<double>> turnpike_recover(const DistanceMultiset& distances,
                                                  const TurnpikeOptions& opts) {
  const std::size_t n = distances.point_count();
  if (n > opts.max_points) {
    throw std::invalid_argument("turnpike_recover: " + std::to_string(n) +
                                " points exceed the limit of " + std::to_string(opts.max_points));
  }
  if (n == 1) return {{0.0}};
  std::vector<double> pool = distances.values();
  std::sort(pool.begin(), pool.end());
  if (n == 2) return {{0.0, pool.front()}};
  const double tol = opts.rel_tol * std::max(pool.back(), 1e-300);
  TurnpikeSearch search(n, tol);
  search.run(std::move(pool));
  return search.take_solutions();
}

}  // namespace edm

#include "edmkit/completion.hpp"
#include "edmkit/embedding.hpp"
#include "edmkit/unlabeled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace edm {

namespace {

Matrix augment(const DistanceMatrix& d, const Vector& squared_distances) {
  const Index n = d.size();
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = d.entries();
  aug.block(0, n, n, 1) = squared_distances;
  aug.block(n, 0, 1, n) = squared_distances.transpose();
  return aug;
}

// Candidate indices of every microphone 2..m within the window around t1,
// skipping echoes flagged in `used` (may be empty).
std::vector<std::vector<std::size_t>> windowed(
    const std::vector<std::vector<double>>& lists, double t1, double window,
    const std::vector<std::vector<bool>>& used) {
  std::vector<std::vector<std::size_t>> out(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (std::size_t t = 0; t < lists[i].size(); ++t) {
      if (!used.empty() && used[i][t]) continue;
      if (std::abs(lists[i][t] - t1) <= window) out[i].push_back(t);
    }
  }
  return out;
}

EchoSortResult search(const PointSet& mics, const DistanceMatrix& d, double t1,
                      const std::vector<std::vector<double>>& lists,
                      const std::vector<std::vector<std::size_t>>& allowed, double speed) {
  const Index m = mics.size();
  const std::size_t others = allowed.size();
  Vector dv(m);
  dv(0) = (speed * t1) * (speed * t1);

  EchoSortResult best;
  best.score = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pos(others, 0);
  while (true) {
    for (std::size_t i = 0; i < others; ++i) {
      const double r = speed * lists[i][allowed[i][pos[i]]];
      dv(static_cast<Index>(i) + 1) = r * r;
    }
    const double score = sstress_augmented(d, dv, static_cast<int>(mics.dim()));
    ++best.evaluated;
    if (score < best.score) {
      best.score = score;
      best.squared_distances = dv;
      best.choice.resize(others);
      for (std::size_t i = 0; i < others; ++i) best.choice[i] = allowed[i][pos[i]];
    }
    // Odometer over the windowed lists, last microphone fastest.
    std::size_t k = others;
    while (k > 0) {
      --k;
      if (++pos[k] < allowed[k].size()) break;
      pos[k] = 0;
      if (k == 0) return best;
    }
    if (others == 0) return best;
  }
}

}  // namespace

double sstress_augmented(const DistanceMatrix& d, const Vector& squared_distances, int dim,
                         int max_sweeps) {
  const Index n = d.size();
  if (squared_distances.size() != n) {
    throw std::invalid_argument("sstress_augmented: need one distance per point");
  }
  if (dim < 1) throw std::invalid_argument("sstress_augmented: dim must be >= 1");
  if (n == 0) return 0.0;
  const DistanceMatrix aug(augment(d, squared_distances));
  const NoisyObservation obs = NoisyObservation::complete(aug);

  const int mds_dim = static_cast<int>(std::min<Index>(dim, n));
  Matrix start = Matrix::Zero(dim, n + 1);
  start.topRows(mds_dim) = classical_mds(aug, mds_dim).coords();
  DescentOptions opts;
  opts.max_sweeps = max_sweeps;
  opts.warm_start = PointSet(start);
  const CompletionResult fit = alternating_descent(obs, dim, opts);
  return (fit.edm.entries() - obs.observed()).norm();
}

EchoSortResult echo_sort(const PointSet& mics, double t1,
                         const std::vector<std::vector<double>>& candidate_times, double speed,
                         double window) {
  if (static_cast<Index>(candidate_times.size()) + 1 != mics.size()) {
    throw std::invalid_argument("echo_sort: need one candidate list per microphone 2..m");
  }
  if (!(speed > 0.0) || !(window >= 0.0)) {
    throw std::invalid_argument("echo_sort: speed must be positive and window >= 0");
  }
  const auto allowed = windowed(candidate_times, t1, window, {});
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    if (allowed[i].empty()) {
      throw std::invalid_argument("echo_sort: no candidate within the window for microphone " +
                                  std::to_string(i + 2));
    }
  }
  return search(mics, assemble_edm(mics), t1, candidate_times, allowed, speed);
}

double array_diameter(const PointSet& mics) {
  const DistanceMatrix d = assemble_edm(mics);
  return d.size() == 0 ? 0.0 : std::sqrt(d.entries().maxCoeff());
}

Vec3 locate_image_source(const PointSet& mics, const Vector& squared_distances) {
  if (mics.dim() != 3) throw std::invalid_argument("locate_image_source: microphones must be 3D");
  const Index m = mics.size();
  if (squared_distances.size() != m) {
    throw std::invalid_argument("locate_image_source: need one distance per microphone");
  }
  if (m < 4) throw std::invalid_argument("locate_image_source: need at least 4 microphones");
  const DistanceMatrix aug(augment(assemble_edm(mics), squared_distances));
  const PointSet embedded = classical_mds(aug, 3);
  const RigidTransform fit = procrustes(embedded.coords().leftCols(m), mics.coords());
  return fit.apply(embedded.coords().rightCols(1));
}

std::vector<DetectedImageSource> sort_echoes(const PointSet& mics, const EchoSet& echoes,
                                             const EchoSortingOptions& opts) {
  echoes.validate();
  const Index m = mics.size();
  if (static_cast<Index>(echoes.arrival_times.size()) != m) {
    throw std::invalid_argument("sort_echoes: need one arrival list per microphone");
  }
  if (!(opts.tau > 0.0)) throw std::invalid_argument("sort_echoes: tau must be > 0");
  const double window =
      opts.window > 0.0 ? opts.window : array_diameter(mics) / echoes.speed;
  const DistanceMatrix d = assemble_edm(mics);
  const double d_norm_sq = d.entries().squaredNorm();

  const std::vector<std::vector<double>> others(echoes.arrival_times.begin() + 1,
                                                echoes.arrival_times.end());
  std::vector<std::vector<bool>> used;
  for (const auto& list : others) used.emplace_back(list.size(), false);

  const auto& anchors = echoes.arrival_times.front();
  std::vector<bool> anchor_used(anchors.size(), false);
  // Best combination per anchor; an entry stays valid until one of its
  // echoes is taken, since removing other candidates cannot beat it.
  std::vector<std::optional<EchoSortResult>> best(anchors.size());
  std::vector<bool> stale(anchors.size(), true);
  auto relative = [&](const EchoSortResult& r) {
    return r.score / std::sqrt(d_norm_sq + 2.0 * r.squared_distances.squaredNorm());
  };

  std::vector<DetectedImageSource> found;
  while (opts.max_sources == 0 || found.size() < opts.max_sources) {
    std::optional<std::size_t> pick;
    double pick_rel = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      if (anchor_used[a]) continue;
      if (stale[a]) {
        stale[a] = false;
        best[a].reset();
        const auto allowed = windowed(others, anchors[a], window, used);
        if (std::none_of(allowed.begin(), allowed.end(),
                         [](const auto& l) { return l.empty(); })) {
          best[a] = search(mics, d, anchors[a], others, allowed, echoes.speed);
        }
      }
      if (!best[a]) continue;
      const double rel = relative(*best[a]);
      if (rel < pick_rel) {
        pick_rel = rel;
        pick = a;
      }
    }
    if (!pick || !(pick_rel < opts.tau)) break;

    const EchoSortResult& hit_sort = *best[*pick];
    DetectedImageSource hit;
    hit.squared_distances = hit_sort.squared_distances;
    hit.score = hit_sort.score;
    hit.echo_indices.push_back(*pick);
    for (std::size_t i = 0; i < hit_sort.choice.size(); ++i) {
      hit.echo_indices.push_back(hit_sort.choice[i]);
      used[i][hit_sort.choice[i]] = true;
    }
    hit.position = locate_image_source(mics, hit_sort.squared_distances);
    anchor_used[*pick] = true;
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      if (anchor_used[a] || !best[a]) continue;
      for (std::size_t i = 0; i < best[a]->choice.size(); ++i) {
        if (used[i][best[a]->choice[i]]) stale[a] = true;
      }
    }
    found.push_back(std::move(hit));
  }
  return found;
}

}  // namespace edm

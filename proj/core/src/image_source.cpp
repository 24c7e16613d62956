#include "edmkit/random.hpp"
#include "edmkit/unlabeled.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace edm {

namespace {

bool strictly_inside(const Vec3& x, const Vec3& extents) {
  return (x.array() > 0.0).all() && (x.array() < extents.array()).all();
}

constexpr double kDuplicateTolerance = 1e-9;

}  // namespace

Vec3 image_source(const Vec3& source, const Vec3& wall_point, const Vec3& wall_normal) {
  if (std::abs(wall_normal.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("image_source: wall normal must have unit length");
  }
  return source + 2.0 * (wall_point - source).dot(wall_normal) * wall_normal;
}

RoomSpec::RoomSpec(const Vec3& extents, const Vec3& source, Eigen::Matrix3Xd microphones)
    : extents_(extents), source_(source), mics_(std::move(microphones)) {
  if (!extents_.allFinite() || (extents_.array() <= 0.0).any()) {
    throw std::invalid_argument("RoomSpec: extents must be positive");
  }
  if (mics_.cols() < 1) throw std::invalid_argument("RoomSpec: need at least one microphone");
  if (!strictly_inside(source_, extents_)) {
    throw std::invalid_argument("RoomSpec: source must lie strictly inside the room");
  }
  for (Index i = 0; i < mics_.cols(); ++i) {
    if (!strictly_inside(mics_.col(i), extents_)) {
      throw std::invalid_argument("RoomSpec: microphone " + std::to_string(i) +
                                  " must lie strictly inside the room");
    }
  }
}

std::array<WallPlane, 6> RoomSpec::walls() const {
  std::array<WallPlane, 6> out;
  for (int axis = 0; axis < 3; ++axis) {
    const Vec3 e = Vec3::Unit(axis);
    out[2 * axis] = WallPlane{Vec3::Zero(), -e};
    out[2 * axis + 1] = WallPlane{extents_[axis] * e, e};
  }
  return out;
}

std::vector<ImageSourceInfo> enumerate_image_sources(const RoomSpec& room, int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("enumerate_image_sources: order must be 1 or 2");
  }
  const auto walls = room.walls();
  std::vector<ImageSourceInfo> out;
  for (int w = 0; w < 6; ++w) {
    out.push_back({image_source(room.source(), walls[w].point, walls[w].normal), {w}});
  }
  if (order == 2) {
    for (int first = 0; first < 6; ++first) {
      const Vec3 once = out[first].position;
      for (int second = 0; second < 6; ++second) {
        if (second == first) continue;
        out.push_back({image_source(once, walls[second].point, walls[second].normal),
                       {first, second}});
      }
    }
  }
  return out;
}

std::vector<ImageSourceInfo> image_sources(const RoomSpec& room, int order) {
  std::vector<ImageSourceInfo> out;
  for (auto& candidate : enumerate_image_sources(room, order)) {
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const ImageSourceInfo& kept) {
      return (kept.position - candidate.position).norm() <= kDuplicateTolerance;
    });
    if (!duplicate) out.push_back(std::move(candidate));
  }
  return out;
}

void EchoSet::validate() const {
  if (arrival_times.empty()) throw std::invalid_argument("EchoSet: need at least one microphone");
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw std::invalid_argument("EchoSet: speed must be positive");
  }
  for (const auto& times : arrival_times) {
    for (double t : times) {
      if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("EchoSet: arrival times must be finite and >= 0");
      }
    }
    if (!std::is_sorted(times.begin(), times.end())) {
      throw std::invalid_argument("EchoSet: arrival times must be sorted ascending");
    }
  }
}

SimulatedEchoes simulate_echoes(const RoomSpec& room, int order, double jitter, int decoys,
                                std::uint64_t seed, double speed) {
  if (jitter < 0.0 || decoys < 0) {
    throw std::invalid_argument("simulate_echoes: jitter and decoys must be >= 0");
  }
  SimulatedEchoes out;
  out.sources = image_sources(room, order);
  out.echoes.speed = speed;
  Rng rng(seed);
  const Index m = room.microphone_count();
  const auto count = static_cast<int>(out.sources.size());

  std::vector<std::vector<double>> clean(m);
  double latest = 0.0;
  for (Index i = 0; i < m; ++i) {
    for (const auto& s : out.sources) {
      const double t = (s.position - room.microphones().col(i)).norm() / speed;
      clean[i].push_back(t);
      latest = std::max(latest, t);
    }
  }

  for (Index i = 0; i < m; ++i) {
    std::vector<double> times;
    std::vector<int> labels;
    for (int s = 0; s < count; ++s) {
      double t = clean[i][s];
      if (jitter > 0.0) t = std::max(0.0, t + uniform(rng, -jitter, jitter));
      times.push_back(t);
      labels.push_back(s);
    }
    for (int k = 0; k < decoys; ++k) {
      times.push_back(uniform(rng, 0.0, latest));
      labels.push_back(-1);
    }
    std::vector<std::size_t> order_idx(times.size());
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
    std::vector<double> sorted_times;
    std::vector<int> sorted_labels;
    for (std::size_t idx : order_idx) {
      sorted_times.push_back(times[idx]);
      sorted_labels.push_back(labels[idx]);
    }
    out.echoes.arrival_times.push_back(std::move(sorted_times));
    out.labels.push_back(std::move(sorted_labels));
  }
  return out;
}

std::vector<WallPlane> reconstruct_walls(const std::vector<Vec3>& image_sources,
                                         const Vec3& loudspeaker) {
  std::vector<WallPlane> walls;
  walls.reserve(image_sources.size());
  for (const Vec3& img : image_sources) {
    const Vec3 diff = img - loudspeaker;
    const double len = diff.norm();
    if (!(len > 0.0)) {
      throw std::invalid_argument("reconstruct_walls: image source coincides with the loudspeaker");
    }
    walls.push_back(WallPlane{0.5 * (img + loudspeaker), diff / len});
  }
  return walls;
}

}  // namespace edm

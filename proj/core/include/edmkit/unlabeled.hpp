#pragma once

// Localization from unlabeled distances.
//
//  * Shoebox image-source model and an echo simulator producing per-microphone
//    arrival times with hidden labels.
//  * Echo sorting: pick one echo per microphone so that the microphone EDM
//    augmented with the implied distances is closest to an EDM in 3D
//    (measured with s-stress), then locate the image source and the wall.
//  * Turnpike: recover 1D point sets from the unlabeled multiset of their
//    pairwise distances.

#include "edmkit/edm_core.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace edm {

using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfSound = 343.0;

/// A plane through `point` with unit `normal` (pointing out of the room).
struct WallPlane {
  Vec3 point;
  Vec3 normal;

  /// Signed distance of x along the normal.
  double signed_distance(const Vec3& x) const { return normal.dot(x - point); }
};

/// Mirror image of `source` across the plane (wall_point, wall_normal).
/// Throws when |wall_normal| differs from 1 by more than 1e-10.
Vec3 image_source(const Vec3& source, const Vec3& wall_point, const Vec3& wall_normal);

/// Axis-aligned room [0, L_x] x [0, L_y] x [0, L_z] with one source and an
/// array of microphones, all strictly inside.
class RoomSpec {
 public:
  RoomSpec(const Vec3& extents, const Vec3& source, Eigen::Matrix3Xd microphones);

  const Vec3& extents() const { return extents_; }
  const Vec3& source() const { return source_; }
  const Eigen::Matrix3Xd& microphones() const { return mics_; }
  Index microphone_count() const { return mics_.cols(); }

  /// Walls x = 0, x = L_x, y = 0, y = L_y, z = 0, z = L_z, in that order.
  std::array<WallPlane, 6> walls() const;

 private:
  Vec3 extents_;
  Vec3 source_;
  Eigen::Matrix3Xd mics_;
};

struct ImageSourceInfo {
  Vec3 position;
  /// Walls crossed, in reflection order (indices into RoomSpec::walls()).
  std::vector<int> walls;
};

/// Every image source up to `order` (1 or 2) from sequences of distinct
/// consecutive walls, without removing coincident ones: 6 first-order plus
/// 30 second-order.
std::vector<ImageSourceInfo> enumerate_image_sources(const RoomSpec& room, int order);

/// enumerate_image_sources with positions coinciding within 1e-9 m merged
/// (the first sequence is kept).
std::vector<ImageSourceInfo> image_sources(const RoomSpec& room, int order);

/// Per-microphone ascending echo arrival times (seconds).
struct EchoSet {
  std::vector<std::vector<double>> arrival_times;
  double speed = kSpeedOfSound;

  /// Throws unless there is at least one microphone, every time is >= 0 and
  /// every list is sorted.
  void validate() const;
};

struct SimulatedEchoes {
  EchoSet echoes;
  /// labels[i][t] = index into `sources` of the echo arrival_times[i][t], or
  /// -1 for a decoy.
  std::vector<std::vector<int>> labels;
  std::vector<ImageSourceInfo> sources;
};

/// Arrival times |s~ - r_i| / c of every (deduplicated) image source up to
/// `order`, with U[-jitter, jitter] seconds added and `decoys` spurious
/// times per microphone drawn from U[0, latest true arrival].
SimulatedEchoes simulate_echoes(const RoomSpec& room, int order, double jitter, int decoys,
                                std::uint64_t seed, double speed = kSpeedOfSound);

/// Distance of [[D, d], [d^T, 0]] from the nearest EDM of points in `dim`
/// dimensions: |D_aug - edm(X*)|_F where X* minimizes s-stress, found by
/// coordinate descent warm-started from classical MDS of D_aug. An empty D
/// scores 0.
double sstress_augmented(const DistanceMatrix& d, const Vector& squared_distances, int dim = 3,
                         int max_sweeps = 50);

struct EchoSortResult {
  /// Squared distances (c t)^2 for microphone 1 and the chosen echoes.
  Vector squared_distances;
  /// Chosen index into each of the candidate lists (microphones 2..m).
  std::vector<std::size_t> choice;
  double score = 0.0;
  /// Number of combinations scored.
  std::size_t evaluated = 0;
};

/// Scores every combination of candidate echoes (one per microphone 2..m)
/// within `window` seconds of t1 and returns the one with the smallest
/// sstress_augmented. Ties go to the lexicographically first combination.
/// Throws when windowing leaves a microphone without candidates.
EchoSortResult echo_sort(const PointSet& mics, double t1,
                         const std::vector<std::vector<double>>& candidate_times,
                         double speed, double window);

/// Largest pairwise distance between microphones.
double array_diameter(const PointSet& mics);

/// Multilateration: classical MDS of the augmented EDM, aligned onto the
/// microphones; returns the position of the extra point.
Vec3 locate_image_source(const PointSet& mics, const Vector& squared_distances);

/// Walls as perpendicular bisectors between the loudspeaker and first-order
/// image sources. Throws when an image source coincides with the speaker.
std::vector<WallPlane> reconstruct_walls(const std::vector<Vec3>& image_sources,
                                         const Vec3& loudspeaker);

struct EchoSortingOptions {
  /// Seconds; non-positive means array diameter / speed.
  double window = 0.0;
  /// Accept a combination when score < tau * |D_aug|_F.
  double tau = 1e-3;
  /// Stop after this many image sources; 0 means no limit.
  std::size_t max_sources = 0;
};

struct DetectedImageSource {
  Vec3 position;
  Vector squared_distances;
  /// Index of the used echo in every microphone's list (microphone 1 first).
  std::vector<std::size_t> echo_indices;
  double score = 0.0;
};

/// Runs echo_sort for every echo of microphone 1, then repeatedly accepts the
/// combination with the smallest relative score (score / |D_aug|_F) that
/// passes the tau test and removes its echoes from further consideration.
/// Results are in acceptance order.
std::vector<DetectedImageSource> sort_echoes(const PointSet& mics, const EchoSet& echoes,
                                             const EchoSortingOptions& opts = {});

/// Unsigned pairwise distances of some set of n points on a line.
class DistanceMultiset {
 public:
  explicit DistanceMultiset(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  /// n with n(n-1)/2 = |values|.
  std::size_t point_count() const { return points_; }

 private:
  std::vector<double> values_;
  std::size_t points_ = 0;
};

struct TurnpikeOptions {
  /// Matching tolerance relative to the largest distance.
  double rel_tol = 1e-9;
  std::size_t max_points = 12;
};

/// All 1D point sets (canonical form: sorted, minimum at 0, and the
/// lexicographically smaller of the set and its mirror image) generating the
/// multiset. Backtracking places the largest unassigned distance first and
/// prunes partial labelings whose EDM is not an EDM of rank <= 3 with a
/// one-dimensional embedding. Empty when no labeling exists.
std::vector<std::vector<double>> turnpike_recover(const DistanceMultiset& distances,
                                                  const TurnpikeOptions& opts = {});

/// Canonical form used by turnpike_recover.
std::vector<double> canonical_line_set(std::vector<double> points);

}  // namespace edm

#pragma once

// Multidimensional unfolding: recover m microphones and k sources from the
// m x k matrix of squared microphone-source distances, posed as EDM
// completion with the block mask [[0, 1], [1, 0]].

#include "edmkit/completion.hpp"
#include "edmkit/edm_core.hpp"

#include <string>

namespace edm {

class UnfoldingInstance {
 public:
  explicit UnfoldingInstance(Matrix cross_distances);

  Index microphones() const { return delta_.rows(); }
  Index sources() const { return delta_.cols(); }
  const Matrix& cross_distances() const { return delta_; }

 private:
  Matrix delta_;
};

enum class CompletionMethod { rank, optspace, sstress, sdr };

/// Parses "rank", "optspace", "sstress" or "sdr".
CompletionMethod parse_method(const std::string& name);
std::string method_name(CompletionMethod method);

/// (m+k) x (m+k) mask: zero diagonal blocks, ones off the diagonal blocks.
ObservationMask mdu_mask(Index m, Index k);

/// Fraction of unobserved entries of the full matrix, (m^2 + k^2)/(m + k)^2.
double mdu_missing_fraction(Index m, Index k);

/// Microphones first, sources after.
NoisyObservation embed_unfolding(const UnfoldingInstance& inst);

struct CompletionOptions {
  RankOptions rank;
  OptSpaceOptions optspace;
  DescentOptions descent;
  SdrOptions sdr;
};

/// Dispatches to the completion routine for `method`.
CompletionResult complete_edm(const NoisyObservation& obs, int dim, CompletionMethod method,
                              const CompletionOptions& opts = {});

struct UnfoldingResult {
  PointSet microphones;
  PointSet sources;
  DistanceMatrix edm;
  bool converged = false;
  int iterations = 0;
};

/// Completes the embedded observation, runs classical MDS on the result and
/// splits the columns back into microphones and sources.
UnfoldingResult solve_mdu(const UnfoldingInstance& inst, int dim,
                          CompletionMethod method = CompletionMethod::sdr,
                          const CompletionOptions& opts = {});

}  // namespace edm

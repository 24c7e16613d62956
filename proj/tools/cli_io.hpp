#pragma once

// File formats used by the command-line tool: experiment specs and echo
// times as JSON, point sets as CSV with one point per row.

#include "edmkit/edm_core.hpp"
#include "edmkit/harness.hpp"
#include "edmkit/unlabeled.hpp"

#include <json.hpp>

#include <string>

namespace edm::cli {

/// Keys mirror ExperimentSpec: scenario, n, m, d, trials, deletion_counts,
/// k_values, jitter_levels, jitter_on, methods, seed, success_threshold,
/// threads, lambda. Missing keys keep their defaults.
ExperimentSpec parse_experiment_spec(const nlohmann::json& j);
ExperimentSpec read_experiment_spec(const std::string& path);

/// Array of per-microphone ascending arrival-time arrays.
EchoSet parse_times(const nlohmann::json& j, double speed);
EchoSet read_times(const std::string& path, double speed);

PointSet read_points_csv(const std::string& path);
void write_points_csv(const PointSet& points, const std::string& path);

/// Reads a square distance CSV; squares entries when `plain` is set.
DistanceMatrix read_distances(const std::string& path, bool plain);

}  // namespace edm::cli

#pragma once

// Seeded Monte Carlo runner for completion experiments (random deletions and
// unfolding), the train-times demo, and long-format CSV output.

#include "edmkit/edm_core.hpp"
#include "edmkit/unfolding.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace edm {

enum class Scenario { random_deletion, mdu };

/// Where jitter is added: to squared distances, or to distances before
/// squaring.
enum class JitterMode { squared, sqrt };

Scenario parse_scenario(const std::string& name);  // "random-deletion" / "mdu"
std::string scenario_name(Scenario s);
JitterMode parse_jitter_mode(const std::string& name);  // "squared" / "sqrt"

struct ExperimentSpec {
  Scenario scenario = Scenario::random_deletion;
  /// Points for random deletion.
  Index n = 20;
  /// Microphones for unfolding.
  Index m = 20;
  int dim = 2;
  int trials = 100;
  /// Settings: deleted pairs (random deletion) or source counts (unfolding).
  std::vector<int> deletion_counts;
  std::vector<int> k_values;
  /// Uniform noise half-widths; noise is U[-level, level].
  std::vector<double> jitter_levels{0.0};
  JitterMode jitter_mode = JitterMode::squared;
  std::vector<CompletionMethod> methods;
  std::uint64_t seed = 1;
  /// Success when |D_hat - D|_F / |D|_F < success_threshold.
  double success_threshold = 0.01;
  CompletionOptions completion;
  /// Worker threads over trials; 0 means hardware concurrency.
  unsigned threads = 1;

  /// Throws on empty settings or methods, trials < 1 or a bad threshold.
  void validate() const;
  const std::vector<int>& settings() const;
};

struct ExperimentRow {
  CompletionMethod method = CompletionMethod::sdr;
  int setting = 0;
  double jitter = 0.0;
  double success_rate = 0.0;
  double mean_rel_error = 0.0;
  int trials = 0;
  double wall_seconds = 0.0;
  /// Per-trial relative errors in trial order.
  std::vector<double> errors;
};

struct ExperimentResult {
  std::uint64_t seed = 0;
  /// Ordered by method, then setting, then jitter level.
  std::vector<ExperimentRow> rows;

  const ExperimentRow& find(CompletionMethod method, int setting, double jitter) const;
};

/// Uniform points in the unit square (d = 2) or cube; deletes the given
/// number of unordered pairs uniformly at random.
ExperimentResult run_random_deletion(const ExperimentSpec& spec);

/// m microphones and k sources uniform in the unit cube; observes only
/// microphone-source distances. Errors are measured on the full EDM.
ExperimentResult run_mdu(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "method,setting,jitter,success_rate,mean_rel_error,trials,seed";

/// Long-format CSV, one row per (method, setting, jitter). Numbers use 17
/// significant digits so identical results give identical bytes.
void write_csv(const ExperimentResult& result, std::ostream& out);
void emit_csv(const ExperimentResult& result, const std::string& path);

struct SwissReport {
  std::vector<std::string> cities;
  /// Travel times in minutes.
  Matrix minutes;
  /// 2 x 5 embedding of the squared times.
  PointSet points;
  /// Spectrum of -1/2 J D J sorted by decreasing magnitude.
  Vector eigenvalues;
  /// Share of sum |lambda| carried by the two largest-magnitude eigenvalues.
  double energy_fraction = 0.0;
};

/// Classical MDS of the train-time matrix of five Swiss cities.
SwissReport swiss_demo();

}  // namespace edm

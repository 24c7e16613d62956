#include "edmkit/harness.hpp"

#include "edmkit/embedding.hpp"
#include "edmkit/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace edm {

namespace {

// Stream ids for derive_seed; geometry is shared by every setting and method.
constexpr std::uint64_t kGeometryStream = 1;
constexpr std::uint64_t kMaskStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

struct TrialOutcome {
  std::vector<double> errors;  // method-major, then jitter level
  std::vector<double> seconds;
};

// Unit-uniform symmetric noise pattern shared by every jitter level.
Matrix noise_pattern(std::uint64_t seed, Index size) {
  Rng rng(seed);
  Matrix u = Matrix::Zero(size, size);
  for (Index j = 0; j < size; ++j) {
    for (Index i = 0; i < j; ++i) {
      u(i, j) = u(j, i) = uniform(rng, -1.0, 1.0);
    }
  }
  return u;
}

Matrix jittered(const Matrix& truth, const Matrix& pattern, double level, JitterMode mode) {
  if (level == 0.0) return truth;
  if (mode == JitterMode::squared) return truth + level * pattern;
  Matrix out = (truth.cwiseSqrt() + level * pattern).cwiseMax(0.0);
  return out.cwiseAbs2();
}

Matrix deletion_mask(std::uint64_t seed, Index n, int deletions) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) pairs.emplace_back(i, j);
  }
  if (deletions < 0 || static_cast<std::size_t>(deletions) > pairs.size()) {
    throw std::invalid_argument("deletion count " + std::to_string(deletions) +
                                " is outside [0, n(n-1)/2]");
  }
  Rng rng(seed);
  Matrix w = Matrix::Ones(n, n);
  w.diagonal().setZero();
  // Partial Fisher-Yates: the first `deletions` entries are a uniform subset.
  for (int t = 0; t < deletions; ++t) {
    const std::size_t pick =
        t + static_cast<std::size_t>(uniform_index(rng, pairs.size() - static_cast<std::size_t>(t)));
    std::swap(pairs[t], pairs[pick]);
    w(pairs[t].first, pairs[t].second) = 0.0;
    w(pairs[t].second, pairs[t].first) = 0.0;
  }
  return w;
}

template <typename TrialFn>
std::vector<TrialOutcome> run_trials(int trials, unsigned threads, TrialFn&& fn) {
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) outcomes[t] = fn(t);
    return outcomes;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> failures(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = next++; t < trials; t = next++) outcomes[t] = fn(t);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return outcomes;
}

// Runs every method at every jitter level on one observation pattern.
TrialOutcome evaluate(const ExperimentSpec& spec, const DistanceMatrix& truth,
                      const Matrix& mask, const Matrix& pattern) {
  TrialOutcome out;
  const ObservationMask w(mask);
  for (CompletionMethod method : spec.methods) {
    for (double level : spec.jitter_levels) {
      const auto start = std::chrono::steady_clock::now();
      const Matrix noisy = jittered(truth.entries(), pattern, level, spec.jitter_mode);
      const NoisyObservation obs(noisy.cwiseProduct(mask), w);
      const CompletionResult res = complete_edm(obs, spec.dim, method, spec.completion);
      out.errors.push_back(relative_error(res.edm.entries(), truth.entries()));
      out.seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
  }
  return out;
}

void aggregate(const ExperimentSpec& spec, int setting, const std::vector<TrialOutcome>& outcomes,
               ExperimentResult& result) {
  std::size_t slot = 0;
  for (CompletionMethod method : spec.methods) {
    for (double level : spec.jitter_levels) {
      ExperimentRow row;
      row.method = method;
      row.setting = setting;
      row.jitter = level;
      row.trials = spec.trials;
      int successes = 0;
      double total = 0.0;
      for (const TrialOutcome& o : outcomes) {
        const double e = o.errors[slot];
        row.errors.push_back(e);
        total += e;
        row.wall_seconds += o.seconds[slot];
        if (e < spec.success_threshold) ++successes;
      }
      row.success_rate = static_cast<double>(successes) / spec.trials;
      row.mean_rel_error = total / spec.trials;
      result.rows.push_back(std::move(row));
      ++slot;
    }
  }
}

void sort_rows(const ExperimentSpec& spec, ExperimentResult& result) {
  auto rank_of = [&](CompletionMethod m) {
    return std::find(spec.methods.begin(), spec.methods.end(), m) - spec.methods.begin();
  };
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [&](const ExperimentRow& a, const ExperimentRow& b) {
                     return rank_of(a.method) < rank_of(b.method);
                   });
}

std::string format_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "random-deletion" || name == "random_deletion") return Scenario::random_deletion;
  if (name == "mdu") return Scenario::mdu;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario s) {
  return s == Scenario::mdu ? "mdu" : "random-deletion";
}

JitterMode parse_jitter_mode(const std::string& name) {
  if (name == "squared") return JitterMode::squared;
  if (name == "sqrt") return JitterMode::sqrt;
  throw std::invalid_argument("unknown jitter mode '" + name + "'");
}

const std::vector<int>& ExperimentSpec::settings() const {
  return scenario == Scenario::mdu ? k_values : deletion_counts;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
  if (!(success_threshold > 0.0)) {
    throw std::invalid_argument("ExperimentSpec: success_threshold must be > 0");
  }
  if (methods.empty()) throw std::invalid_argument("ExperimentSpec: no methods");
  if (settings().empty()) {
    throw std::invalid_argument(scenario == Scenario::mdu ? "ExperimentSpec: no k_values"
                                                          : "ExperimentSpec: no deletion_counts");
  }
  if (jitter_levels.empty()) throw std::invalid_argument("ExperimentSpec: no jitter levels");
  for (double j : jitter_levels) {
    if (!(j >= 0.0)) throw std::invalid_argument("ExperimentSpec: jitter levels must be >= 0");
  }
  if (dim < 1) throw std::invalid_argument("ExperimentSpec: dim must be >= 1");
}

const ExperimentRow& ExperimentResult::find(CompletionMethod method, int setting,
                                            double jitter) const {
  for (const auto& row : rows) {
    if (row.method == method && row.setting == setting && row.jitter == jitter) return row;
  }
  throw std::out_of_range("ExperimentResult: no row for " + method_name(method) + " at setting " +
                          std::to_string(setting));
}

ExperimentResult run_random_deletion(const ExperimentSpec& spec) {
  if (spec.scenario != Scenario::random_deletion) {
    throw std::invalid_argument("run_random_deletion: scenario must be random_deletion");
  }
  spec.validate();
  if (spec.n < spec.dim + 1) throw std::invalid_argument("run_random_deletion: n too small");
  ExperimentResult result;
  result.seed = spec.seed;
  for (int deletions : spec.deletion_counts) {
    const auto setting_id = static_cast<std::uint64_t>(deletions);
    auto outcomes = run_trials(spec.trials, spec.threads, [&](int t) {
      const auto trial = static_cast<std::uint64_t>(t);
      Rng geo(derive_seed(spec.seed, kGeometryStream, trial));
      const PointSet x(uniform_matrix(geo, spec.dim, spec.n));
      const DistanceMatrix truth = assemble_edm(x);
      const Matrix mask =
          deletion_mask(derive_seed(spec.seed, kMaskStream ^ (setting_id << 8), trial), spec.n,
                        deletions);
      const Matrix pattern =
          noise_pattern(derive_seed(spec.seed, kNoiseStream ^ (setting_id << 8), trial), spec.n);
      return evaluate(spec, truth, mask, pattern);
    });
    aggregate(spec, deletions, outcomes, result);
  }
  sort_rows(spec, result);
  return result;
}

ExperimentResult run_mdu(const ExperimentSpec& spec) {
  if (spec.scenario != Scenario::mdu) throw std::invalid_argument("run_mdu: scenario must be mdu");
  spec.validate();
  ExperimentResult result;
  result.seed = spec.seed;
  for (int k : spec.k_values) {
    if (k < 1) throw std::invalid_argument("run_mdu: k must be >= 1");
    const auto setting_id = static_cast<std::uint64_t>(k);
    auto outcomes = run_trials(spec.trials, spec.threads, [&](int t) {
      const auto trial = static_cast<std::uint64_t>(t);
      Rng geo(derive_seed(spec.seed, kGeometryStream, trial));
      const Matrix mics = uniform_matrix(geo, spec.dim, spec.m);
      Rng src(derive_seed(spec.seed, kGeometryStream ^ (setting_id << 8), trial));
      const Matrix sources = uniform_matrix(src, spec.dim, k);
      Matrix all(spec.dim, spec.m + k);
      all << mics, sources;
      const DistanceMatrix truth = assemble_edm(PointSet(all));
      const Matrix mask = mdu_mask(spec.m, k).entries();
      const Matrix pattern =
          noise_pattern(derive_seed(spec.seed, kNoiseStream ^ (setting_id << 8), trial),
                        spec.m + k);
      return evaluate(spec, truth, mask, pattern);
    });
    aggregate(spec, k, outcomes, result);
  }
  sort_rows(spec, result);
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return spec.scenario == Scenario::mdu ? run_mdu(spec) : run_random_deletion(spec);
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) {
    out << method_name(row.method) << ',' << row.setting << ',' << format_number(row.jitter)
        << ',' << format_number(row.success_rate) << ',' << format_number(row.mean_rel_error)
        << ',' << row.trials << ',' << result.seed << '\n';
  }
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(result, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

SwissReport swiss_demo() {
  Matrix minutes(5, 5);
  minutes << 0, 33, 128, 40, 66,
             33, 0, 158, 64, 101,
             128, 158, 0, 88, 56,
             40, 64, 88, 0, 34,
             66, 101, 56, 34, 0;
  MdsResult mds = classical_mds_detailed(DistanceMatrix(minutes.cwiseAbs2()), 2);
  const double total = mds.eigenvalues.cwiseAbs().sum();
  const double fraction = total > 0.0 ? mds.eigenvalues.head(2).cwiseAbs().sum() / total : 0.0;
  return SwissReport{{"Lausanne", "Geneva", "Zurich", "Neuchatel", "Bern"},
                     std::move(minutes),
                     std::move(mds.points),
                     std::move(mds.eigenvalues),
                     fraction};
}

}  // namespace edm

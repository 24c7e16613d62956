#include "cli_io.hpp"

#include "edmkit/csv.hpp"
#include "edmkit/embedding.hpp"
#include "edmkit/harness.hpp"
#include "edmkit/unfolding.hpp"
#include "edmkit/unlabeled.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace edm;
using nlohmann::json;

struct MdsArgs {
  std::string in, out;
  int dim = 2;
  bool plain = false;
};

struct CompleteArgs {
  std::string in, mask, out, points;
  std::string method = "sdr";
  int dim = 2;
  std::optional<double> lambda;
  std::optional<int> max_iter;
  bool plain = false;
  bool random_init = false;
  std::uint64_t seed = 1;
};

struct UnfoldArgs {
  std::string cross, mics_out = "mics.csv", sources_out = "sources.csv";
  std::string method = "sdr";
  int dim = 3;
  bool plain = false;
};

struct EchoArgs {
  std::string mics, times;
  double speed = kSpeedOfSound;
  std::string window = "auto";
  double tau = 1e-3;
  std::size_t max_sources = 0;
  std::vector<double> source;
};

struct BenchArgs {
  std::string scenario, spec, out;
  std::optional<unsigned> threads;
};

void emit_points(const PointSet& p, const std::string& path) {
  if (path.empty()) {
    write_matrix_csv(p.coords().transpose(), std::cout);
  } else {
    cli::write_points_csv(p, path);
  }
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

int run_mds(const MdsArgs& a) {
  emit_points(classical_mds(cli::read_distances(a.in, a.plain), a.dim), a.out);
  return 0;
}

int run_complete(const CompleteArgs& a) {
  const DistanceMatrix observed = cli::read_distances(a.in, a.plain);
  const ObservationMask mask(read_matrix_csv_file(a.mask));
  const NoisyObservation obs(observed.entries().cwiseProduct(mask.entries()), mask);
  CompletionOptions opts;
  opts.sdr.lambda = a.lambda;
  if (a.max_iter) {
    opts.rank.max_iter = *a.max_iter;
    opts.optspace.max_iter = *a.max_iter;
    opts.descent.max_sweeps = *a.max_iter;
    opts.sdr.max_iter = *a.max_iter;
  }
  if (a.random_init) opts.descent.init = DescentInit::random;
  opts.descent.seed = a.seed;
  const CompletionResult res = complete_edm(obs, a.dim, parse_method(a.method), opts);
  if (a.out.empty()) {
    write_matrix_csv(res.edm.entries(), std::cout);
  } else {
    write_matrix_csv_file(res.edm.entries(), a.out);
  }
  if (!a.points.empty()) {
    emit_points(res.points ? *res.points : classical_mds(res.edm, a.dim), a.points);
  }
  std::cerr << a.method << ": " << res.iterations << " iterations, "
            << (res.converged ? "converged" : "stopped at the iteration limit") << '\n';
  return res.converged ? 0 : 2;
}

int run_unfold(const UnfoldArgs& a) {
  Matrix delta = read_matrix_csv_file(a.cross);
  if (a.plain) delta = delta.cwiseAbs2();
  const UnfoldingResult res =
      solve_mdu(UnfoldingInstance(delta), a.dim, parse_method(a.method));
  cli::write_points_csv(res.microphones, a.mics_out);
  cli::write_points_csv(res.sources, a.sources_out);
  return res.converged ? 0 : 2;
}

int run_echo_sort(const EchoArgs& a) {
  const PointSet mics = cli::read_points_csv(a.mics);
  const EchoSet echoes = cli::read_times(a.times, a.speed);
  EchoSortingOptions opts;
  opts.tau = a.tau;
  opts.max_sources = a.max_sources;
  if (a.window != "auto") opts.window = std::stod(a.window);
  const auto found = sort_echoes(mics, echoes, opts);

  json out = json::array();
  std::vector<Vec3> images;
  for (const auto& hit : found) {
    out.push_back({{"position", vec_json(hit.position)},
                   {"echo_indices", hit.echo_indices},
                   {"score", hit.score}});
    images.push_back(hit.position);
  }
  json doc{{"image_sources", out}};
  if (a.source.size() == 3) {
    json walls = json::array();
    for (const auto& w : reconstruct_walls(images, Vec3(a.source[0], a.source[1], a.source[2]))) {
      walls.push_back({{"point", vec_json(w.point)}, {"normal", vec_json(w.normal)}});
    }
    doc["walls"] = walls;
  }
  std::cout << std::setprecision(17) << doc.dump(2) << '\n';
  return 0;
}

int run_turnpike(const std::string& path) {
  const auto solutions = turnpike_recover(DistanceMultiset(read_values_csv_file(path)));
  std::cout << json(solutions).dump() << '\n';
  return solutions.empty() ? 2 : 0;
}

int run_bench(const BenchArgs& a) {
  ExperimentSpec spec = cli::read_experiment_spec(a.spec);
  if (!a.scenario.empty() && parse_scenario(a.scenario) != spec.scenario) {
    throw std::invalid_argument("--scenario " + a.scenario + " does not match the spec file");
  }
  if (a.threads) spec.threads = *a.threads;
  const ExperimentResult result = run_experiment(spec);
  if (a.out.empty()) {
    write_csv(result, std::cout);
  } else {
    emit_csv(result, a.out);
  }
  return 0;
}

int run_swiss(const std::string& out) {
  const SwissReport report = swiss_demo();
  if (!out.empty()) cli::write_points_csv(report.points, out);
  for (std::size_t i = 0; i < report.cities.size(); ++i) {
    const auto col = static_cast<Index>(i);
    std::cout << std::left << std::setw(10) << report.cities[i] << std::right << std::fixed
              << std::setprecision(3) << std::setw(10) << report.points.coords()(0, col)
              << std::setw(10) << report.points.coords()(1, col) << '\n';
  }
  std::cout << std::setprecision(6) << "top-2 energy fraction: " << report.energy_fraction
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edmkit: Euclidean distance matrix toolbox"};
  app.require_subcommand(1);
  int status = 0;

  MdsArgs mds;
  auto* mds_cmd = app.add_subcommand("mds", "Classical MDS of a distance CSV");
  mds_cmd->add_option("--in", mds.in, "squared distance matrix CSV")->required()->check(CLI::ExistingFile);
  mds_cmd->add_option("--dim", mds.dim, "embedding dimension")->capture_default_str();
  mds_cmd->add_option("--out", mds.out, "points CSV, one point per row (default stdout)");
  mds_cmd->add_flag("--plain", mds.plain, "input holds plain distances, square them first");
  mds_cmd->callback([&] { status = run_mds(mds); });

  CompleteArgs comp;
  auto* comp_cmd = app.add_subcommand("complete", "Complete a partially observed EDM");
  comp_cmd->add_option("--in", comp.in, "observed squared distances CSV")->required()->check(CLI::ExistingFile);
  comp_cmd->add_option("--mask", comp.mask, "0/1 mask CSV")->required()->check(CLI::ExistingFile);
  comp_cmd->add_option("--method", comp.method, "rank, optspace, sstress or sdr")
      ->check(CLI::IsMember({"rank", "optspace", "sstress", "sdr"}))
      ->capture_default_str();
  comp_cmd->add_option("--dim", comp.dim, "embedding dimension")->capture_default_str();
  comp_cmd->add_option("--lambda", comp.lambda, "SDR data weight (default sqrt(#missing))");
  comp_cmd->add_option("--max-iter", comp.max_iter, "iteration or sweep limit");
  comp_cmd->add_flag("--random-init", comp.random_init, "random start for sstress");
  comp_cmd->add_option("--seed", comp.seed, "seed for --random-init")->capture_default_str();
  comp_cmd->add_option("--out", comp.out, "completed EDM CSV (default stdout)");
  comp_cmd->add_option("--points", comp.points, "points CSV");
  comp_cmd->add_flag("--plain", comp.plain, "input holds plain distances, square them first");
  comp_cmd->callback([&] { status = run_complete(comp); });

  UnfoldArgs unf;
  auto* unf_cmd = app.add_subcommand("unfold", "Multidimensional unfolding from cross distances");
  unf_cmd->add_option("--cross", unf.cross, "m x k squared cross distances CSV")->required()->check(CLI::ExistingFile);
  unf_cmd->add_option("--dim", unf.dim, "embedding dimension")->capture_default_str();
  unf_cmd->add_option("--method", unf.method, "completion method")
      ->check(CLI::IsMember({"rank", "optspace", "sstress", "sdr"}))
      ->capture_default_str();
  unf_cmd->add_option("--mics-out", unf.mics_out)->capture_default_str();
  unf_cmd->add_option("--sources-out", unf.sources_out)->capture_default_str();
  unf_cmd->add_flag("--plain", unf.plain, "input holds plain distances, square them first");
  unf_cmd->callback([&] { status = run_unfold(unf); });

  EchoArgs echo;
  auto* echo_cmd = app.add_subcommand("echo-sort", "Find image sources from unlabeled echoes");
  echo_cmd->add_option("--mics", echo.mics, "microphone CSV, one per row")->required()->check(CLI::ExistingFile);
  echo_cmd->add_option("--times", echo.times, "JSON array of per-microphone arrival times")->required()->check(CLI::ExistingFile);
  echo_cmd->add_option("--speed", echo.speed, "propagation speed (m/s)")->capture_default_str();
  echo_cmd->add_option("--window", echo.window, "seconds or 'auto' (diameter / speed)")->capture_default_str();
  echo_cmd->add_option("--tau", echo.tau, "acceptance threshold relative to |D_aug|_F")->capture_default_str();
  echo_cmd->add_option("--max-sources", echo.max_sources, "stop after this many image sources (0 = no limit)")
      ->capture_default_str();
  echo_cmd->add_option("--source", echo.source, "loudspeaker x y z; adds wall planes")->expected(3);
  echo_cmd->callback([&] { status = run_echo_sort(echo); });

  std::string turnpike_in;
  auto* tp_cmd = app.add_subcommand("turnpike", "Recover 1D points from unlabeled distances");
  tp_cmd->add_option("--distances", turnpike_in, "CSV of n(n-1)/2 plain distances")->required()->check(CLI::ExistingFile);
  tp_cmd->callback([&] { status = run_turnpike(turnpike_in); });

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a seeded Monte Carlo experiment");
  bench_cmd->add_option("--scenario", bench.scenario, "random-deletion or mdu")
      ->check(CLI::IsMember({"random-deletion", "mdu"}));
  bench_cmd->add_option("--spec", bench.spec, "experiment JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "results CSV (default stdout)");
  bench_cmd->add_option("--threads", bench.threads, "worker threads (0 = all cores)");
  bench_cmd->callback([&] { status = run_bench(bench); });

  std::string swiss_out;
  auto* swiss_cmd = app.add_subcommand("swiss-demo", "Map of Swiss cities from train times");
  swiss_cmd->add_option("--out", swiss_out, "points CSV");
  swiss_cmd->callback([&] { status = run_swiss(swiss_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "edmkit: " << e.what() << '\n';
    return 1;
  }
  return status;
}

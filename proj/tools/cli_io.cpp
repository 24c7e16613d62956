#include "cli_io.hpp"

#include "edmkit/csv.hpp"

#include <fstream>
#include <stdexcept>

namespace edm::cli {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

}  // namespace

ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
  ExperimentSpec spec;
  if (j.contains("scenario")) spec.scenario = parse_scenario(j.at("scenario").get<std::string>());
  if (spec.scenario == Scenario::mdu) spec.dim = 3;
  spec.n = j.value("n", spec.n);
  spec.m = j.value("m", spec.m);
  spec.dim = j.value("d", spec.dim);
  spec.trials = j.value("trials", spec.trials);
  spec.deletion_counts = j.value("deletion_counts", spec.deletion_counts);
  spec.k_values = j.value("k_values", spec.k_values);
  spec.jitter_levels = j.value("jitter_levels", spec.jitter_levels);
  if (j.contains("jitter_on")) spec.jitter_mode = parse_jitter_mode(j.at("jitter_on"));
  if (j.contains("methods")) {
    for (const auto& name : j.at("methods")) spec.methods.push_back(parse_method(name));
  } else {
    spec.methods = {CompletionMethod::rank, CompletionMethod::sstress, CompletionMethod::sdr};
  }
  spec.seed = j.value("seed", spec.seed);
  spec.success_threshold = j.value("success_threshold", spec.success_threshold);
  spec.threads = j.value("threads", spec.threads);
  if (j.contains("lambda")) spec.completion.sdr.lambda = j.at("lambda").get<double>();
  spec.validate();
  return spec;
}

ExperimentSpec read_experiment_spec(const std::string& path) {
  return parse_experiment_spec(load_json(path));
}

EchoSet parse_times(const nlohmann::json& j, double speed) {
  EchoSet echoes;
  echoes.speed = speed;
  echoes.arrival_times = j.get<std::vector<std::vector<double>>>();
  echoes.validate();
  return echoes;
}

EchoSet read_times(const std::string& path, double speed) {
  return parse_times(load_json(path), speed);
}

PointSet read_points_csv(const std::string& path) {
  return PointSet(read_matrix_csv_file(path).transpose());
}

void write_points_csv(const PointSet& points, const std::string& path) {
  write_matrix_csv_file(points.coords().transpose(), path);
}

DistanceMatrix read_distances(const std::string& path, bool plain) {
  const Matrix m = read_matrix_csv_file(path);
  if (m.rows() != m.cols()) throw std::invalid_argument("distance matrix must be square");
  return DistanceMatrix(plain ? Matrix(m.cwiseAbs2()) : m);
}

}  // namespace edm::cli

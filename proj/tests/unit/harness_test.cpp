#include "edmkit/csv.hpp"
#include "edmkit/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

using namespace edm;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.n = 10;
  spec.trials = 4;
  spec.deletion_counts = {0, 5};
  spec.jitter_levels = {0.0, 0.05};
  spec.methods = {CompletionMethod::rank, CompletionMethod::sstress, CompletionMethod::sdr};
  spec.seed = 11;
  return spec;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

TEST(SwissDemo, FrozenSpectrum) {
  const SwissReport r = swiss_demo();
  ASSERT_EQ(r.cities.size(), 5u);
  EXPECT_EQ(r.points.dim(), 2);
  EXPECT_EQ(r.points.size(), 5);
  EXPECT_NEAR(r.energy_fraction, 0.9628137853282689, 1e-12);
  const double want[] = {15128.0365, 417.572779, -326.124801, -274.284514};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.eigenvalues(k), want[k], 1e-4) << k;
  EXPECT_NEAR(r.eigenvalues(4), 0.0, 1e-8);
  EXPECT_EQ(r.minutes, r.minutes.transpose());
}

TEST(Harness, CsvShapeAndOrder) {
  const ExperimentResult r = run_experiment(small_spec());
  ASSERT_EQ(r.rows.size(), 3u * 2u * 2u);
  EXPECT_EQ(r.rows.front().method, CompletionMethod::rank);
  EXPECT_EQ(r.rows.back().method, CompletionMethod::sdr);
  const std::string csv = csv_of(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12);
}

TEST(Harness, ZeroDeletionsAlwaysSucceed) {
  ExperimentSpec spec = small_spec();
  spec.deletion_counts = {0};
  spec.jitter_levels = {0.0};
  const ExperimentResult r = run_experiment(spec);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.success_rate, 1.0) << method_name(row.method);
    EXPECT_EQ(row.errors.size(), 4u);
  }
}

TEST(Harness, DeterministicAcrossThreadCounts) {
  ExperimentSpec spec = small_spec();
  const std::string one = csv_of(run_experiment(spec));
  spec.threads = 2;
  const std::string two = csv_of(run_experiment(spec));
  EXPECT_EQ(one, two);
  spec.seed = 12;
  EXPECT_NE(one, csv_of(run_experiment(spec)));
}

// Frozen on first run. A change here means the seeded output moved.
TEST(Harness, RegressionHash) {
  ExperimentSpec spec;
  spec.n = 6;
  spec.trials = 3;
  spec.deletion_counts = {3};
  spec.jitter_levels = {0.0, 0.1};
  spec.methods = {CompletionMethod::rank, CompletionMethod::sstress, CompletionMethod::sdr};
  spec.seed = 2024;
  const std::string csv = csv_of(run_experiment(spec));
  EXPECT_EQ(fnv1a(csv), 12466879571048945357ull) << csv;
}

TEST(Harness, MduScenario) {
  ExperimentSpec spec;
  spec.scenario = Scenario::mdu;
  spec.m = 6;
  spec.dim = 3;
  spec.trials = 2;
  spec.k_values = {8};
  spec.methods = {CompletionMethod::sdr};
  const ExperimentResult r = run_experiment(spec);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].setting, 8);
  EXPECT_NO_THROW(r.find(CompletionMethod::sdr, 8, 0.0));
  EXPECT_THROW(r.find(CompletionMethod::rank, 8, 0.0), std::out_of_range);
}

TEST(Harness, SpecValidation) {
  ExperimentSpec spec = small_spec();
  spec.methods.clear();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.trials = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.deletion_counts = {46};
  EXPECT_THROW(run_experiment(spec), std::invalid_argument);
  spec = small_spec();
  spec.scenario = Scenario::mdu;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Harness, NameRoundTrips) {
  for (Scenario s : {Scenario::random_deletion, Scenario::mdu}) {
    EXPECT_EQ(parse_scenario(scenario_name(s)), s);
  }
  EXPECT_EQ(parse_scenario("random_deletion"), Scenario::random_deletion);
  EXPECT_EQ(parse_jitter_mode("sqrt"), JitterMode::sqrt);
  EXPECT_THROW(parse_scenario("labels"), std::invalid_argument);
  EXPECT_THROW(parse_jitter_mode("cubed"), std::invalid_argument);
}

TEST(Csv, MatrixRoundTrip) {
  Matrix m(2, 3);
  m << 0.1, -2.5e-7, 3, 1.0 / 3.0, 4, 1e300;
  std::stringstream io;
  write_matrix_csv(m, io);
  EXPECT_EQ(read_matrix_csv(io), m);
  std::istringstream comments("# header\n1,2\n\n3,4\n");
  Matrix want(2, 2);
  want << 1, 2, 3, 4;
  EXPECT_EQ(read_matrix_csv(comments), want);
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(ragged), std::runtime_error);
  std::istringstream junk("1,x\n");
  EXPECT_THROW(read_matrix_csv(junk), std::runtime_error);
}

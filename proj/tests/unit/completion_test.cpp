#include "edmkit/completion.hpp"
#include "edmkit/random.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace edm;

namespace {

Matrix random_mask(Rng& rng, Index n, int deletions) {
  Matrix w = Matrix::Ones(n, n);
  w.diagonal().setZero();
  int removed = 0;
  while (removed < deletions) {
    const auto i = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const auto j = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    if (i == j || w(i, j) == 0.0) continue;
    w(i, j) = w(j, i) = 0.0;
    ++removed;
  }
  return w;
}

NoisyObservation masked(const DistanceMatrix& d, const Matrix& w) {
  return NoisyObservation(d.entries().cwiseProduct(w), ObservationMask(w));
}

void expect_feasible(const DistanceMatrix& d) {
  EXPECT_LE((d.entries() - d.entries().transpose()).norm(), 0.0);
  EXPECT_EQ(d.entries().diagonal().norm(), 0.0);
  EXPECT_GE(d.entries().minCoeff(), 0.0);
}

}  // namespace

TEST(NoisyObservation, ClampsAndCounts) {
  Matrix d(3, 3);
  d << 0, -0.5, 2, -0.5, 0, 1, 2, 1, 0;
  const NoisyObservation obs(d, ObservationMask::full(3));
  EXPECT_EQ(obs.clamped_entries(), 1);
  EXPECT_GE(obs.observed().minCoeff(), 0.0);
}

TEST(Stress, TwoPointExamples) {
  Matrix x(1, 2);
  x << 0, 2;
  Matrix d(2, 2);
  d << 0, 9, 9, 0;
  const NoisyObservation obs(d, ObservationMask::full(2));
  EXPECT_DOUBLE_EQ(stress_raw(PointSet(x), obs), 1.0);
  EXPECT_DOUBLE_EQ(stress_s(PointSet(x), obs), 25.0);
}

TEST(Stress, ZeroForGeneratingPoints) {
  Rng rng(31);
  const PointSet x(uniform_matrix(rng, 2, 7));
  const NoisyObservation obs = NoisyObservation::complete(assemble_edm(x));
  EXPECT_LE(stress_raw(x, obs), 1e-24);
  EXPECT_LE(stress_s(x, obs), 1e-24);
}

TEST(Stress, MatchesNaiveLoops) {
  Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = gaussian_matrix(rng, 3, 9);
    const Matrix w = random_mask(rng, 9, 12);
    Matrix d = uniform_matrix(rng, 9, 9, 0.0, 4.0);
    d = (d + d.transpose()).eval();
    d.diagonal().setZero();
    const NoisyObservation obs(d.cwiseProduct(w), ObservationMask(w));
    EXPECT_NEAR(stress_s(PointSet(x), obs), oracle::s_stress(x, obs.observed(), w), 1e-12);
    EXPECT_NEAR(stress_raw(PointSet(x), obs), oracle::raw_stress(x, obs.observed(), w), 1e-12);
  }
}

TEST(EvThreshold, KeepsLargestMagnitudes) {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << 1.0, -6.0, 4.0, 0.5;
  const Matrix t = ev_threshold(m, 2);
  EXPECT_DOUBLE_EQ(t(1, 1), -6.0);
  EXPECT_DOUBLE_EQ(t(2, 2), 4.0);
  EXPECT_NEAR(t(0, 0), 0.0, 1e-14);
  EXPECT_EQ(numerical_rank(t), 2);
}

TEST(RankCompletion, FullMaskIsFixedPoint) {
  Rng rng(33);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 12)));
  const CompletionResult r = rank_complete_edm(NoisyObservation::complete(d), 2);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_LE(relative_error(r.edm.entries(), d.entries()), 1e-12);
}

TEST(RankCompletion, OneDeletedEntry) {
  Rng rng(34);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 20)));
  const CompletionResult r = rank_complete_edm(masked(d, random_mask(rng, 20, 1)), 2);
  EXPECT_LT(relative_error(r.edm.entries(), d.entries()), 0.01);
  expect_feasible(r.edm);
}

TEST(RankCompletion, TraceNonIncreasing) {
  Rng rng(35);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 20)));
  RankOptions opts;
  opts.max_iter = 300;
  const CompletionResult r = rank_complete_edm(masked(d, random_mask(rng, 20, 80)), 2, opts);
  ASSERT_GE(r.objective_trace.size(), 2u);
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
    EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] * (1.0 + 1e-12) + 1e-15) << t;
  }
  expect_feasible(r.edm);
}

TEST(OptSpace, FullMaskExactLowRank) {
  Rng rng(36);
  const Matrix a = gaussian_matrix(rng, 15, 3);
  const Matrix b = gaussian_matrix(rng, 12, 3);
  const Matrix m = a * b.transpose();
  const OptSpaceResult r = optspace(m, Matrix::Ones(15, 12), 3);
  EXPECT_LE(relative_error(r.completed, m), 1e-8);
  EXPECT_LE((r.left.transpose() * r.left - Matrix::Identity(3, 3)).norm(), 1e-10);
  EXPECT_LE((r.right.transpose() * r.right - Matrix::Identity(3, 3)).norm(), 1e-10);
}

TEST(OptSpace, LargePlanarArrayWithMissingEntries) {
  Rng rng(37);
  const Index n = 200;
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, n)));
  const int deletions = static_cast<int>(0.3 * n * (n - 1) / 2);
  const CompletionResult r = optspace_complete_edm(masked(d, random_mask(rng, n, deletions)), 2);
  EXPECT_LT(relative_error(r.edm.entries(), d.entries()), 0.01);
}

TEST(OptSpace, SmallRandomDeletionsRunsAndHasLowRank) {
  Rng rng(38);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 20)));
  const Matrix w = random_mask(rng, 20, 60);
  Matrix obs = d.entries().cwiseProduct(w);
  Matrix mw = w;
  mw.diagonal().setOnes();
  const OptSpaceResult r = optspace(obs, mw, 4);
  EXPECT_LE(numerical_rank(0.5 * (r.completed + r.completed.transpose()), 1e-9), 8);
  Eigen::JacobiSVD<Matrix> svd(r.completed);
  const Vector s = svd.singularValues();
  EXPECT_LE(s(4), 1e-9 * s(0));
  expect_feasible(optspace_complete_edm(masked(d, w), 2).edm);
}

TEST(OptSpace, RejectsBadInput) {
  EXPECT_THROW(optspace(Matrix::Ones(4, 4), Matrix::Zero(4, 4), 2), std::invalid_argument);
  EXPECT_THROW(optspace(Matrix::Ones(4, 4), Matrix::Ones(4, 4), 5), std::invalid_argument);
}

TEST(Quartic, SingleNeighbourExpansion) {
  Matrix x = Matrix::Zero(1, 2);
  Matrix d(2, 2);
  d << 0, 1, 1, 0;
  const NoisyObservation obs(d, ObservationMask::full(2));
  const QuarticCoeffs q = quartic_coeffs(obs, PointSet(x), 0, 0);
  const std::array<double, 5> want{1, 0, -2, 0, 1};
  for (int l = 0; l < 5; ++l) EXPECT_DOUBLE_EQ(q.a[l], want[l]) << l;
}

TEST(Quartic, NoNeighboursGivesZero) {
  Matrix w = Matrix::Zero(3, 3);
  w(1, 2) = w(2, 1) = 1;
  const NoisyObservation obs(Matrix::Ones(3, 3), ObservationMask(w));
  const QuarticCoeffs q = quartic_coeffs(obs, PointSet(Matrix::Ones(2, 3)), 0, 1);
  for (double a : q.a) EXPECT_EQ(a, 0.0);
  EXPECT_FALSE(minimize_quartic(q).has_value());
}

TEST(Quartic, LeadingCoefficientIsNeighbourCount) {
  Rng rng(39);
  const Matrix w = random_mask(rng, 8, 9);
  const NoisyObservation obs(Matrix::Ones(8, 8).cwiseProduct(w), ObservationMask(w));
  const PointSet x(gaussian_matrix(rng, 2, 8));
  for (Index i = 0; i < 8; ++i) {
    EXPECT_DOUBLE_EQ(quartic_coeffs(obs, x, i, 0).a[4], w.row(i).sum());
  }
}

TEST(Quartic, MatchesDirectEvaluation) {
  Rng rng(40);
  for (int t = 0; t < 50; ++t) {
    const Index n = 6 + static_cast<Index>(t % 5);
    const Matrix x = gaussian_matrix(rng, 3, n);
    const Matrix w = random_mask(rng, n, static_cast<int>(t % 7));
    const Matrix truth = assemble_edm(PointSet(gaussian_matrix(rng, 3, n))).entries();
    const NoisyObservation obs(truth.cwiseProduct(w), ObservationMask(w));
    const auto i = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const auto k = static_cast<Index>(uniform_index(rng, 3));
    const QuarticCoeffs q = quartic_coeffs(obs, PointSet(x), i, k);
    for (double v : {-3.0, -1.5, -0.2, 0.0, 0.7, 1.9, 3.3}) {
      const double direct = oracle::stress_through_point(x, obs.observed(), w, i, k, v);
      EXPECT_NEAR(q(v), direct, 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
  EXPECT_THROW(quartic_coeffs(NoisyObservation::complete(DistanceMatrix(Matrix::Zero(2, 2))),
                              PointSet(Matrix::Zero(1, 2)), 2, 0),
               std::invalid_argument);
}

TEST(MinimizeQuartic, Examples) {
  QuarticCoeffs pure;
  pure.a = {0, 0, 0, 0, 1};
  EXPECT_NEAR(*minimize_quartic(pure), 0.0, 1e-12);
  QuarticCoeffs w;
  w.a = {1, 0, -2, 0, 1};
  EXPECT_NEAR(*minimize_quartic(w), -1.0, 1e-12);
}

TEST(MinimizeQuartic, MatchesGridSearch) {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    QuarticCoeffs q;
    const double neighbours = 1.0 + static_cast<double>(uniform_index(rng, 5));
    q.a = {uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -8, 8), uniform(rng, -5, 5),
           neighbours};
    const double grid = oracle::grid_argmin(q, -10.0, 10.0, 1e-4);
    const double got = *minimize_quartic(q);
    EXPECT_NEAR(got, oracle::polished_grid_argmin(q, -10.0, 10.0, 1e-4), 1e-3);
    EXPECT_LE(q(got), q(grid) + 1e-9);
  }
}

TEST(MinimizeQuartic, ExactTieTakesSmallerRoot) {
  // (x^2 - 1)^2 shifted by 3: minima at 2 and 4 with equal value.
  QuarticCoeffs q;
  q.a = {64, -96, 52, -12, 1};
  EXPECT_NEAR(*minimize_quartic(q), 2.0, 1e-9);
  EXPECT_NEAR(oracle::polished_grid_argmin(q, -10.0, 10.0, 1e-4), 2.0, 1e-6);
}

TEST(CubicRoots, KnownRoots) {
  // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
  const auto r = cubic_real_roots(1, 0, -7, 6);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], -3, 1e-12);
  EXPECT_NEAR(r[1], 1, 1e-12);
  EXPECT_NEAR(r[2], 2, 1e-12);
  const auto one = cubic_real_roots(2, 0, 2, -4);  // 2(x - 1)(x^2 + x + 2)
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 1, 1e-12);
  EXPECT_THROW(cubic_real_roots(0, 1, 1, 1), std::invalid_argument);
}

TEST(AlternatingDescent, ZeroObservationStaysAtZero) {
  const NoisyObservation obs(Matrix::Zero(5, 5), ObservationMask::full(5));
  const CompletionResult r = alternating_descent(obs, 2);
  EXPECT_EQ(r.objective_trace.back(), 0.0);
  EXPECT_EQ(r.points->coords().norm(), 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(AlternatingDescent, MonotoneTrace) {
  Rng rng(42);
  for (int t = 0; t < 5; ++t) {
    const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 15)));
    DescentOptions opts;
    opts.init = DescentInit::random;
    opts.seed = static_cast<std::uint64_t>(t);
    const CompletionResult r = alternating_descent(masked(d, random_mask(rng, 15, 30)), 2, opts);
    for (std::size_t s = 1; s < r.objective_trace.size(); ++s) {
      EXPECT_LE(r.objective_trace[s], r.objective_trace[s - 1] + 1e-12) << s;
    }
  }
}

TEST(AlternatingDescent, RecoversCompleteNoiselessSets) {
  Rng rng(43);
  int successes = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 10)));
    DescentOptions opts;
    opts.init = DescentInit::random;
    opts.seed = derive_seed(43, 0, static_cast<std::uint64_t>(t));
    opts.max_sweeps = 2000;
    opts.tol = 1e-12;
    const CompletionResult r = alternating_descent(NoisyObservation::complete(d), 2, opts);
    if (relative_error(r.edm.entries(), d.entries()) < 1e-4) ++successes;
  }
  EXPECT_GE(successes, 18);
}

TEST(AlternatingDescent, WarmStartShapeChecked) {
  DescentOptions opts;
  opts.warm_start = PointSet(Matrix::Zero(3, 4));
  EXPECT_THROW(alternating_descent(NoisyObservation::complete(DistanceMatrix(Matrix::Zero(4, 4))),
                                   2, opts),
               std::invalid_argument);
}

TEST(Sdr, FullMaskExact) {
  Rng rng(44);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 15)));
  const CompletionResult r = sdr_complete_edm(NoisyObservation::complete(d), 2);
  EXPECT_LT(relative_error(r.edm.entries(), d.entries()), 1e-4);
  ASSERT_TRUE(r.points.has_value());
  EXPECT_EQ(r.points->dim(), 2);
}

TEST(Sdr, RandomDeletionsFeasibleAndAccurate) {
  Rng rng(45);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 20)));
  const Matrix w = random_mask(rng, 20, 60);
  const CompletionResult r = sdr_complete_edm(masked(d, w), 2);
  expect_feasible(r.edm);
  EXPECT_TRUE(is_edm(r.edm, 1e-6).is_edm);
  EXPECT_LT(relative_error(r.edm.entries(), d.entries()), 0.01);
  // Observed entries are reproduced.
  EXPECT_LT(relative_error(r.edm.entries().cwiseProduct(w), d.entries().cwiseProduct(w)), 0.01);
}

TEST(Sdr, Validation) {
  const NoisyObservation obs = NoisyObservation::complete(DistanceMatrix(Matrix::Zero(3, 3)));
  EXPECT_THROW(sdr_complete_edm(obs, 3), std::invalid_argument);
  SdrOptions opts;
  opts.lambda = -1.0;
  EXPECT_THROW(sdr_complete_edm(obs, 1, opts), std::invalid_argument);
}

TEST(Equivalence, NoiselessCompleteReachesZeroObjective) {
  Rng rng(46);
  const DistanceMatrix d = assemble_edm(PointSet(uniform_matrix(rng, 2, 8)));
  const NoisyObservation obs = NoisyObservation::complete(d);
  DescentOptions opts;
  opts.init = DescentInit::random;
  opts.seed = 3;
  opts.max_sweeps = 2000;
  const CompletionResult a = alternating_descent(obs, 2, opts);
  const CompletionResult s = sdr_complete_edm(obs, 2);
  EXPECT_LE(stress_s(*a.points, obs), 1e-8 * d.entries().squaredNorm());
  EXPECT_LE(stress_s(*s.points, obs), 1e-6 * d.entries().squaredNorm());
}

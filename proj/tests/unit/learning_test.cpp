#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lmsr/lmsr.hpp"
#include "test_support.hpp"

namespace lmsr {
namespace {

TEST(WeightedMajority, EqualLossesLeaveWeightsUnchanged) {
  WeightedMajority wm(3, 0.5);
  const std::vector<double> first{0.2, 0.9, 0.4};
  wm.update(first);
  const auto before = wm.weights();
  const std::vector<double> same{0.7, 0.7, 0.7};
  wm.update(same);
  const auto after = wm.weights();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(before[i], after[i], 1e-15);
}

TEST(WeightedMajority, TwoExpertsLnTwo) {
  WeightedMajority wm(2, std::log(2.0));
  const std::vector<double> l{0.0, 1.0};
  EXPECT_NEAR(wm.update(l), 0.5, 1e-15);
  const auto w = wm.weights();
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0 / 3.0, 1e-15);
}

TEST(WeightedMajority, ClosedFormAfterTSteps) {
  const std::size_t n = 5;
  const double eta = 0.3;
  WeightedMajority wm(n, eta);
  std::vector<double> l(n, 1.0);
  l[0] = 0.0;
  for (int t = 1; t <= 40; ++t) {
    wm.update(l);
    const double expect = 1.0 / (1.0 + static_cast<double>(n - 1) * std::exp(-eta * t));
    EXPECT_NEAR(wm.weights()[0], expect, 1e-13) << t;
  }
}

TEST(WeightedMajority, LongSequencesStayNormalized) {
  WeightedMajority wm(4, 2.0);
  std::vector<double> l{1.0, 1.0, 1.0, 0.0};
  for (int t = 0; t < 100000; ++t) wm.update(l);
  double sum = 0.0;
  for (double w : wm.weights()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(wm.weights()[3], 1.0, 1e-12);
}

TEST(WeightedMajority, RejectsLossesOutsideUnitInterval) {
  WeightedMajority wm(2, 0.1);
  const std::vector<double> bad{0.5, 1.5};
  EXPECT_THROW(wm.update(bad), InvalidInput);
  const std::vector<double> neg{-0.1, 0.5};
  EXPECT_THROW(wm.update(neg), InvalidInput);
  const std::vector<double> short_row{0.5};
  EXPECT_THROW(wm.update(short_row), InvalidInput);
  EXPECT_THROW(WeightedMajority(0, 0.1), InvalidInput);
  EXPECT_THROW(WeightedMajority(2, 0.0), InvalidInput);
}

TEST(WeightedMajority, RegretChecks) {
  std::vector<std::vector<double>> zeros(50, std::vector<double>(3, 0.0));
  const auto z = wm_regret_check(zeros, 3, 0.1);
  EXPECT_NEAR(z.regret, 0.0, 1e-15);
  EXPECT_TRUE(z.holds());

  std::vector<std::vector<double>> alt;
  for (int t = 0; t < 100; ++t) alt.push_back(t % 2 ? std::vector<double>{0, 1} : std::vector<double>{1, 0});
  const auto a = wm_regret_check(alt, 2, 0.1);
  EXPECT_NEAR(a.bound, 10.0 + std::log(2.0) / 0.1, 1e-12);
  EXPECT_TRUE(a.holds());

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> l(200, std::vector<double>(4));
    for (auto& row : l)
      for (auto& v : row) v = u(rng);
    EXPECT_TRUE(wm_regret_check(l, 4, 0.05).holds()) << seed;
  }
}

TEST(Sinkhorn, DoublyStochasticInputIsAFixedPoint) {
  const RealMatrix m{{0.3, 0.7}, {0.7, 0.3}};
  const auto r = sinkhorn_balance(m);
  EXPECT_LE(r.iterations, 1u);
  EXPECT_LT(max_abs_difference(r.matrix, m), 1e-9);
}

TEST(Sinkhorn, BalancesTwoByTwo) {
  const RealMatrix m{{1, 2}, {3, 4}};
  const auto r = sinkhorn_balance(m, {1e-10, 10000});
  for (double s : row_sums(r.matrix)) EXPECT_NEAR(s, 1.0, 1e-10);
  for (double s : col_sums(r.matrix)) EXPECT_NEAR(s, 1.0, 1e-10);
  // closed form s = sqrt(ad) / (sqrt(ad) + sqrt(bc))
  const double s = std::sqrt(4.0) / (std::sqrt(4.0) + std::sqrt(6.0));
  EXPECT_NEAR(r.matrix(0, 0), s, 1e-9);
}

TEST(Sinkhorn, OutputIsDiagonalScalingOfInput) {
  std::mt19937_64 rng(17);
  const auto m = testing::random_positive_matrix(rng, 5);
  const auto r = sinkhorn_balance(m);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const double log_ratio = std::log(r.matrix(i, j) / m(i, j));
      EXPECT_NEAR(log_ratio, r.log_row_scale[i] + r.log_col_scale[j], 1e-8);
      // rank-one structure of the log-ratio matrix
      const double cross = std::log(r.matrix(i, j) / m(i, j)) + std::log(r.matrix(0, 0) / m(0, 0)) -
                           std::log(r.matrix(i, 0) / m(i, 0)) - std::log(r.matrix(0, j) / m(0, j));
      EXPECT_NEAR(cross, 0.0, 1e-8);
    }
}

TEST(Sinkhorn, IdempotentAndScaleInvariant) {
  std::mt19937_64 rng(23);
  const auto m = testing::random_positive_matrix(rng, 6);
  const auto once = sinkhorn_balance(m).matrix;
  const auto twice = sinkhorn_balance(once).matrix;
  EXPECT_LT(max_abs_difference(once, twice), 1e-9);
  const auto scaled = sinkhorn_balance(m.map([](double v) { return 37.5 * v; })).matrix;
  EXPECT_LT(max_abs_difference(once, scaled), 1e-9);
}

TEST(Sinkhorn, CapRaisesConvergenceErrorWithLastIterate) {
  const RealMatrix m{{1, 1e-6}, {1, 1}};
  try {
    sinkhorn_balance(m, {1e-12, 2});
    FAIL() << "expected a convergence error";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.dimension(), 2u);
    EXPECT_EQ(e.last_iterate().size(), 4u);
    EXPECT_GT(e.deviation(), 1e-12);
  }
}

TEST(Sinkhorn, RejectsNonPositiveInput) {
  EXPECT_THROW(sinkhorn_balance(RealMatrix{{1, 0}, {1, 1}}), InvalidInput);
  EXPECT_THROW(sinkhorn_balance(RealMatrix(2, 3, 1.0)), InvalidInput);
}

TEST(PermELearn, ZeroLossLeavesWeightsUniform) {
  PermELearn p(4, 0.5);
  EXPECT_NEAR(p.update(RealMatrix(4, 4, 0.0)), 0.0, 1e-15);
  for (double v : p.weights().data()) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(PermELearn, ConstantShiftIsRemovedByBalancing) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  RealMatrix l(3, 3);
  for (auto& v : l.data()) v = u(rng);
  PermELearn a(3, 1.0), b(3, 1.0);
  a.update(l);
  b.update(l.map([](double v) { return v + 0.5; }));
  EXPECT_LT(max_abs_difference(a.weights(), b.weights()), 1e-9);
}

TEST(PermELearn, TwoByTwoClosedForm) {
  PermELearn p(2, 1.0);
  p.update(RealMatrix{{1, 0}, {0, 1}});
  const double s = 0.268941421369995120748840758178;  // e^-1 / (e^-1 + 1)
  EXPECT_NEAR(p.weights()(0, 0), s, 1e-9);
  EXPECT_NEAR(p.weights()(0, 1), 1.0 - s, 1e-9);
}

TEST(PermELearn, StaysDoublyStochastic) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PermELearn p(5, 0.7);
  for (int t = 0; t < 100; ++t) {
    RealMatrix l(5, 5);
    for (auto& v : l.data()) v = u(rng);
    p.update(l);
    EXPECT_LE(doubly_stochastic_deviation(p.weights()), 1e-9);
  }
  EXPECT_THROW(p.update(RealMatrix(5, 5, 2.0)), InvalidInput);
}

TEST(PermELearn, BoundHolds) {
  const auto zero = permelearn_bound_check(std::vector<RealMatrix>(10, RealMatrix(3, 3, 0.0)), 3, 0.5);
  EXPECT_NEAR(zero.algorithm_loss, 0.0, 1e-15);
  EXPECT_NEAR(zero.bound, 3 * std::log(3.0) / (1 - std::exp(-0.5)), 1e-12);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RealMatrix> ls(50, RealMatrix(4, 4));
    for (auto& l : ls)
      for (auto& v : l.data()) v = u(rng);
    EXPECT_TRUE(permelearn_bound_check(ls, 4, 0.5).holds()) << seed;
  }
}

TEST(PermELearn, AdversarialLossesOnOnePermutation) {
  // every permutation but the identity pays 1 per round somewhere
  RealMatrix l(5, 5, 1.0);
  for (std::size_t i = 0; i < 5; ++i) l(i, i) = 0.0;
  const auto r = permelearn_bound_check(std::vector<RealMatrix>(200, l), 5, 0.5);
  EXPECT_NEAR(r.best_permutation_loss, 0.0, 1e-15);
  EXPECT_TRUE(r.holds());
  EXPECT_GT(r.margin(), 0.0);
}

TEST(Assignment, EnumerationMatchesHungarian) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (std::size_t n = 1; n <= 7; ++n) {
    RealMatrix m(n, n);
    for (auto& v : m.data()) v = u(rng);
    EXPECT_NEAR(best_assignment(m, false).value, testing::hungarian_min(m), 1e-9);
    EXPECT_NEAR(best_assignment(m, true).value, -testing::hungarian_min(m.map([](double v) { return -v; })), 1e-9);
  }
}

TEST(Correspondence, ZeroTradesKeepUniformPrices) {
  const auto r = lmsr_wm_correspondence_check(std::vector<std::vector<double>>(20, std::vector<double>(4, 0.0)), 4,
                                               1.0, 0.1);
  EXPECT_LT(r.max_price_weight_gap, 1e-15);
  EXPECT_TRUE(r.argmax_agrees);
  EXPECT_NEAR(r.linear_shortfall, 0.0, 1e-15);
}

TEST(Correspondence, RandomTradesMatchWeights) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  std::vector<std::vector<double>> trades(1000, std::vector<double>(3));
  for (auto& t : trades)
    for (auto& q : t) q = u(rng);
  const auto r = lmsr_wm_correspondence_check(trades, 3, 1.0, 0.01);
  EXPECT_LT(r.max_price_weight_gap, 1e-9);
  EXPECT_TRUE(r.argmax_agrees);
  EXPECT_NEAR(r.bound, 4 * 0.01 * 0.01 * 1000 + std::log(3.0), 1e-12);
  EXPECT_LE(r.linear_shortfall, r.bound);
  EXPECT_LE(r.cost_shortfall, std::log(3.0) + 1e-9);
}

TEST(Correspondence, RejectsOversizedTradesAndSmallEta) {
  const std::vector<std::vector<double>> big{{0.2, 0.0}};
  EXPECT_THROW(lmsr_wm_correspondence_check(big, 2, 1.0, 0.1), InvalidInput);
  const std::vector<std::vector<double>> ok{{0.1, 0.0}};
  EXPECT_THROW(lmsr_wm_correspondence_check(ok, 2, 1.0, 0.1, 0.1), InvalidInput);
  EXPECT_NO_THROW(lmsr_wm_correspondence_check(ok, 2, 1.0, 0.1, 0.5));
}

}  // namespace
}  // namespace lmsr

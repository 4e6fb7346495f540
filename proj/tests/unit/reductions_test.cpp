#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lmsr/lmsr.hpp"
#include "test_support.hpp"

namespace lmsr {
namespace {

using testing::random_2cnf;
using testing::random_binary_matrix;
using testing::random_order;

TEST(Permanent, KnownValues) {
  const RealMatrix a{{4, 3}, {3, 4}};
  EXPECT_NEAR(permanent(a, PermanentMethod::enumeration), 25.0, 1e-12);
  EXPECT_NEAR(permanent(a, PermanentMethod::ryser), 25.0, 1e-12);
  EXPECT_NEAR(permanent(a, PermanentMethod::exact_bigint), 25.0, 0.0);
  const RealMatrix ones(3, 3, 1.0);
  EXPECT_NEAR(permanent(ones, PermanentMethod::ryser), 6.0, 1e-12);
  EXPECT_EQ(permanent_enumerate(RealMatrix(0, 0)), 1.0);
}

TEST(Permanent, MethodsAgreeOnRandomMatrices) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (std::size_t n = 1; n <= 7; ++n) {
    RealMatrix a(n, n);
    for (auto& v : a.data()) v = u(rng);
    const double e = permanent(a, PermanentMethod::enumeration);
    EXPECT_NEAR(permanent(a, PermanentMethod::ryser), e, 1e-10 * std::max(1.0, e));
  }
}

TEST(Permanent, MinorsMatchEnumeration) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    RealMatrix a(n, n);
    for (auto& v : a.data()) v = u(rng);
    const auto r = permanent_and_minors_ryser(a);
    EXPECT_NEAR(r.permanent, permanent_enumerate(a), 1e-10);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_NEAR(r.minors(i, j), n == 1 ? 1.0 : permanent_enumerate(a.minor(i, j)), 1e-10);
  }
}

TEST(Permanent, ExactBigintRejectsFractions) {
  EXPECT_THROW(to_bigint(RealMatrix{{0.5}}), InvalidInput);
  EXPECT_THROW(permanent(RealMatrix(2, 3, 1.0), PermanentMethod::ryser), InvalidInput);
}

TEST(PermanentReduction, AllModesOnSmallMatrices) {
  const Matrix<int> a{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
  for (auto mode : {ReductionMode::exact, ReductionMode::prices, ReductionMode::cost}) {
    ReductionOptions opt;
    opt.mode = mode;
    EXPECT_EQ(permanent_via_market(a, opt).count, 2u) << to_string(mode);
    EXPECT_EQ(permanent_via_cost(a, opt).count, 2u) << to_string(mode);
  }
  EXPECT_EQ(permanent_via_market(Matrix<int>(3, 3, 1)).count, 6u);
  EXPECT_EQ(permanent_via_market(Matrix<int>(3, 3, 0)).count, 0u);
  EXPECT_EQ(permanent_via_market(Matrix<int>{{1}}).count, 1u);
}

TEST(PermanentReduction, ExactValueIsPerB) {
  const Matrix<int> a{{1, 0}, {1, 1}};
  const auto r = permanent_via_market(a);
  ASSERT_TRUE(r.exact_value.has_value());
  // N = 3, B = [[4,3],[4,4]]: per(B) = 16 + 12
  EXPECT_EQ(*r.exact_value, BigInt(28));
  EXPECT_EQ(r.count, 1u);
}

TEST(PermanentReduction, LiquidityDoesNotChangeCounts) {
  std::mt19937_64 rng(8);
  const auto a = random_binary_matrix(rng, 4);
  const auto oracle = permanent_enumerate(a.map([](int v) { return static_cast<double>(v); }));
  for (double b : {0.5, 1.0, 3.0}) {
    ReductionOptions opt;
    opt.b = b;
    opt.mode = ReductionMode::prices;
    EXPECT_EQ(static_cast<double>(permanent_via_market(a, opt).count), oracle) << b;
  }
}

TEST(PermanentReduction, FloatingModeRefusesLargeValues) {
  ReductionOptions opt;
  opt.mode = ReductionMode::prices;
  EXPECT_THROW(permanent_via_market(Matrix<int>(7, 7, 1), opt), DegenerateInstance);
  EXPECT_EQ(permanent_via_market(Matrix<int>(7, 7, 1)).count, 5040u);
}

TEST(PermanentReduction, RandomMatricesMatchOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 5;
    const auto a = random_binary_matrix(rng, n);
    const auto oracle = permanent_exact(a.map([](int v) { return BigInt(v); }));
    EXPECT_EQ(BigInt(permanent_via_market(a).count), oracle);
    EXPECT_EQ(BigInt(permanent_via_cost(a).count), oracle);
  }
}

TEST(LinearExtensions, Examples) {
  EXPECT_EQ(linear_extensions_via_market(PartialOrder(4)).count, 24u);
  EXPECT_EQ(linear_extensions_via_market(PartialOrder(4, {{0, 1}, {2, 3}})).count, 6u);
  EXPECT_EQ(linear_extensions_via_market(PartialOrder(3, {{0, 1}, {1, 2}})).count, 1u);
  EXPECT_EQ(linear_extensions_via_market(PartialOrder(1)).count, 1u);
}

TEST(LinearExtensions, AllModesAgreeWithOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    const auto order = random_order(rng, 2 + trial % 4);
    const auto oracle = count_linear_extensions_oracle(order);
    for (auto mode : {ReductionMode::exact, ReductionMode::prices, ReductionMode::cost}) {
      ReductionOptions opt;
      opt.mode = mode;
      EXPECT_EQ(linear_extensions_via_market(order, opt).count, oracle) << to_string(mode);
    }
  }
}

TEST(LinearExtensions, FirstPeriodDenominator) {
  const auto r = linear_extensions_via_market(PartialOrder(3, {{0, 1}}));
  ASSERT_FALSE(r.trace.rows.empty());
  EXPECT_EQ(r.trace.rows[0].denominator, pair_first_denominator(3).str());
  EXPECT_NEAR(r.trace.rows[0].price_after, 18.0 / 21.0, 1e-12);
}

TEST(PartialOrder, ValidationAndClosure) {
  EXPECT_THROW(PartialOrder(3, {{0, 1}, {1, 2}, {2, 0}}), InvalidInput);
  EXPECT_THROW(PartialOrder(2, {{0, 0}}), InvalidInput);
  EXPECT_THROW(PartialOrder(2, {{0, 2}}), InvalidInput);
  const PartialOrder p(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_TRUE(p.before(0, 2));
  EXPECT_FALSE(p.before(2, 0));
  const auto cover = p.covering_pairs();
  ASSERT_EQ(cover.size(), 2u);
  EXPECT_EQ(cover[0], (PartialOrder::Edge{0, 1}));
  EXPECT_EQ(cover[1], (PartialOrder::Edge{1, 2}));
}

TEST(Count2Sat, Examples) {
  const Literal x1{0, false}, x2{1, false};
  CnfFormula xor_f(2);
  xor_f.add_clause(x1, x2);
  xor_f.add_clause(!x1, !x2);
  EXPECT_EQ(count_2sat_via_market(xor_f).count, 2u);
  CnfFormula none(2);
  none.add_clause(x1, x2);
  none.add_clause(x1, !x2);
  none.add_clause(!x1, x2);
  none.add_clause(!x1, !x2);
  const auto r = count_2sat_via_market(none);
  EXPECT_EQ(r.count, 0u);
  EXPECT_EQ(count_2sat_via_market(CnfFormula(3)).count, 8u);
}

TEST(Count2Sat, AllModesAgreeWithOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int events = 2 + trial % 5;
    const auto f = random_2cnf(rng, events, 1 + trial % 7);
    const auto oracle = count_sat_oracle(f);
    for (auto mode : {ReductionMode::exact, ReductionMode::prices, ReductionMode::cost}) {
      ReductionOptions opt;
      opt.mode = mode;
      EXPECT_EQ(count_2sat_via_market(f, opt).count, oracle) << to_string(mode) << " trial " << trial;
    }
  }
}

TEST(Count2Sat, FirstPeriodDenominator) {
  CnfFormula f(4);
  f.add_clause(Literal{0, false}, Literal{2, true});
  const auto r = count_2sat_via_market(f);
  ASSERT_FALSE(r.trace.rows.empty());
  EXPECT_EQ(r.trace.rows[0].denominator, boolean_first_denominator(4).str());
  EXPECT_EQ(r.count, 12u);
}

TEST(Trace, CsvHeaderAndRows) {
  const auto r = linear_extensions_via_market(PartialOrder(3, {{0, 1}, {1, 2}}));
  const auto csv = trace_csv(r.trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "period,security,quantity,price_before,price_after,D_t");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

}  // namespace
}  // namespace lmsr

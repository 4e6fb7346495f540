#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lmsr/lmsr.hpp"
#include "test_support.hpp"

namespace lmsr {
namespace {

const Literal x1{0, false}, x2{1, false}, x3{2, false};

TEST(BoolMarket, FreshDisjunctionPricesThreeQuarters) {
  BoolMarket m(2, 1.0);
  EXPECT_NEAR(m.price_disjunction(x1, x2), 0.75, 1e-12);
  EXPECT_NEAR(m.price_conjunction(x1, x2), 0.25, 1e-12);
  EXPECT_NEAR(m.cost(), std::log(4.0), 1e-12);
}

TEST(BoolMarket, WeightsAfterOneDisjunctionPurchase) {
  BoolMarket m(2, 1.0);
  m.buy_disjunction(x1, x2, std::log(4.0));
  // outcome weights (1, 4, 4, 4): partition 13
  EXPECT_NEAR(m.cost(), std::log(13.0), 1e-12);
  EXPECT_NEAR(m.price_disjunction(x1, x2), 12.0 / 13.0, 1e-12);
  ExactBoolMarket e(2, 1.0);
  e.apply_disjunction(x1, x2, BigInt(4));
  EXPECT_EQ(e.exact_partition(), BigInt(13));
  EXPECT_EQ(e.exact_disjunction_price(x1, x2), Rational(12, 13));
}

TEST(BoolMarket, FirstDenominatorClosedForm) {
  for (int n = 2; n <= 5; ++n) {
    ExactBoolMarket e(n, 1.0);
    e.apply_disjunction(x1, x2, pow2(static_cast<unsigned>(n)));
    const auto un = static_cast<unsigned>(n);
    EXPECT_EQ(e.exact_partition(), 3 * pow2(2 * un - 2) + pow2(un - 2)) << "N=" << n;
    EXPECT_EQ(e.exact_partition(), boolean_first_denominator(n));
  }
  EXPECT_EQ(boolean_first_denominator(3, true), pow2(6));
}

TEST(BoolMarket, TautologyPricesOne) {
  BoolMarket m(3, 1.0);
  m.buy_disjunction(x1, !x2, 2.0);
  EXPECT_NEAR(m.price_disjunction(x3, !x3), 1.0, 1e-12);
  EXPECT_NEAR(m.buy_disjunction(x3, !x3, 0.5), 0.5, 1e-12);
}

TEST(BoolMarket, ConjunctionPurchaseMatchesGenericMarket) {
  BoolMarket m(3, 1.0);
  Market g(OutcomeSpace::booleans(3), 1.0);
  const double a = m.buy_conjunction(x1, !x3, 1.25);
  const double b = g.buy(securities::conjunction(x1, !x3), 1.25);
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(m.price_conjunction(x1, !x3), g.price(securities::conjunction(x1, !x3)), 1e-12);
  EXPECT_NEAR(m.price_disjunction(x2, x3), g.price(securities::disjunction(x2, x3)), 1e-12);
  EXPECT_NEAR(m.cost(), g.cost(), 1e-12);
}

TEST(BoolMarket, DeMorganIdentity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> q(-2.0, 2.0);
  BoolMarket m(3, 0.8);
  m.buy_disjunction(x1, x2, q(rng));
  m.buy_conjunction(!x2, x3, q(rng));
  m.buy_disjunction(!x1, !x3, q(rng));
  EXPECT_NEAR(m.price_conjunction(x1, x3) + m.price_disjunction(!x1, !x3), 1.0, 1e-12);
}

TEST(BoolMarket, RejectsBadLiterals) {
  BoolMarket m(2, 1.0);
  EXPECT_THROW(m.buy_disjunction(x1, x3, 1.0), InvalidInput);
  EXPECT_THROW(m.buy_disjunction(x1, x1, 1.0), InvalidInput);
  EXPECT_THROW(BoolMarket(0, 1.0), InvalidInput);
}

TEST(CnfFormula, ClauseValidation) {
  CnfFormula f(2);
  f.add_clause(x1, x2);
  EXPECT_THROW(f.add_clause(x2, x1), InvalidInput);  // same clause reordered
  EXPECT_THROW(f.add_clause(x1, x1), InvalidInput);
  EXPECT_THROW(f.add_clause(x1, x3), InvalidInput);
  EXPECT_NO_THROW(f.add_clause(x1, !x1));
}

TEST(CnfFormula, OracleCounts) {
  CnfFormula xor_f(2);
  xor_f.add_clause(x1, x2);
  xor_f.add_clause(!x1, !x2);
  EXPECT_EQ(count_sat_oracle(xor_f), 2u);
  CnfFormula none(2);
  none.add_clause(x1, x2);
  none.add_clause(x1, !x2);
  none.add_clause(!x1, x2);
  none.add_clause(!x1, !x2);
  EXPECT_EQ(count_sat_oracle(none), 0u);
  EXPECT_EQ(count_sat_oracle(CnfFormula(5)), 32u);
}

}  // namespace
}  // namespace lmsr

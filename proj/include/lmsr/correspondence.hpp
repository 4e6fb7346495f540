#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/market.hpp"
#include "lmsr/securities.hpp"
#include "lmsr/weighted_majority.hpp"

namespace lmsr {

/// Index of the largest entry; entries within 1e-12 of the maximum tie and
/// resolve to the lowest index.
inline std::size_t argmax_with_ties(const std::vector<double>& xs) {
  if (xs.empty()) throw InvalidInput("argmax of an empty vector");
  const double top = *std::max_element(xs.begin(), xs.end());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] >= top - 1e-12) return i;
  return 0;
}

struct CorrespondenceReport {
  std::size_t steps = 0;
  double max_price_weight_gap = 0.0;
  bool argmax_agrees = true;
  /// max_i sum_t q_{i,t} - sum_t sum_i p_{i,t} q_{i,t}, prices taken before each step
  double linear_shortfall = 0.0;
  /// max_i sum_t q_{i,t} - (C(Q_T) - C(0)), the shortfall under cost-function payments
  double cost_shortfall = 0.0;
  /// eta^2 T b + b ln n
  double bound = 0.0;
  double margin() const { return bound - linear_shortfall; }
  bool holds(double tolerance = 1e-9) const {
    return max_price_weight_gap <= tolerance && argmax_agrees && linear_shortfall <= bound;
  }
};

/// Runs an n-outcome LMSR and Weighted Majority side by side. Step t buys
/// q_{i,t} in [-eps, eps] of every elementary security i; expert i incurs
/// loss (2 eps - q_{i,t}) / (eta b). Before each step the market prices and the
/// expert weights are compared. eta defaults to 2 eps / b.
inline CorrespondenceReport lmsr_wm_correspondence_check(const std::vector<std::vector<double>>& trades,
                                                         std::size_t n, double b, double eps, double eta = 0.0) {
  if (n == 0) throw InvalidInput("correspondence needs n >= 1");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("liquidity b must be positive");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("chunk bound eps must be positive");
  if (eta == 0.0) eta = 2.0 * eps / b;
  if (!(eta >= 2.0 * eps / b * (1.0 - 1e-12))) throw InvalidInput("eta must be at least 2 eps / b");
  for (const auto& step : trades) {
    if (step.size() != n) throw InvalidInput("trade vector has the wrong length");
    for (double q : step)
      if (!(std::abs(q) <= eps * (1.0 + 1e-12))) throw InvalidInput("trade quantity outside [-eps, eps]");
  }

  Market market(OutcomeSpace::flat(static_cast<int>(n)), b);
  WeightedMajority wm(n, eta);
  std::vector<CompoundSecurity> secs;
  for (std::size_t i = 0; i < n; ++i) secs.push_back(securities::elementary(i));

  CorrespondenceReport r;
  std::vector<double> totals(n, 0.0);
  std::vector<double> prices(n);
  std::vector<double> losses(n);
  double linear_collected = 0.0;
  const double c0 = market.cost();
  for (const auto& step : trades) {
    for (std::size_t i = 0; i < n; ++i) prices[i] = market.price(secs[i]);
    const auto w = wm.weights();
    for (std::size_t i = 0; i < n; ++i) r.max_price_weight_gap = std::max(r.max_price_weight_gap, std::abs(prices[i] - w[i]));
    if (argmax_with_ties(prices) != argmax_with_ties(w)) r.argmax_agrees = false;
    for (std::size_t i = 0; i < n; ++i) {
      linear_collected += prices[i] * step[i];
      totals[i] += step[i];
      losses[i] = (2.0 * eps - step[i]) / (eta * b);
      market.buy(secs[i], step[i]);
    }
    wm.apply_losses(losses);
    ++r.steps;
  }
  for (std::size_t i = 0; i < n; ++i) prices[i] = market.price(secs[i]);
  const auto w = wm.weights();
  for (std::size_t i = 0; i < n; ++i) r.max_price_weight_gap = std::max(r.max_price_weight_gap, std::abs(prices[i] - w[i]));
  if (argmax_with_ties(prices) != argmax_with_ties(w)) r.argmax_agrees = false;

  const double payout = *std::max_element(totals.begin(), totals.end());
  r.linear_shortfall = payout - linear_collected;
  r.cost_shortfall = payout - (market.cost() - c0);
  r.bound = eta * eta * static_cast<double>(trades.size()) * b + b * std::log(static_cast<double>(n));
  return r;
}

}  // namespace lmsr

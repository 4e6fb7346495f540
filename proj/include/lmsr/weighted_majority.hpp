#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/numeric.hpp"

namespace lmsr {

/// Weighted Majority over n experts:
///   w_{i,t} = e^{-eta L_{i,t}} / sum_j e^{-eta L_{j,t}}
/// Cumulative losses are the state; weights are normalized in log space.
class WeightedMajority {
 public:
  WeightedMajority(std::size_t experts, double eta) : eta_(eta), cumulative_(experts, 0.0) {
    if (experts == 0) throw InvalidInput("need at least one expert");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidInput("learning rate must be positive");
  }

  std::size_t experts() const { return cumulative_.size(); }
  double eta() const { return eta_; }
  const std::vector<double>& cumulative_losses() const { return cumulative_; }
  double algorithm_loss() const { return algorithm_loss_; }

  std::vector<double> weights() const {
    LogSumExp z;
    for (double l : cumulative_) z.add(-eta_ * l);
    std::vector<double> w(cumulative_.size());
    const double lz = z.value();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-eta_ * cumulative_[i] - lz);
    return w;
  }

  /// Incur one round of losses; returns the algorithm's loss sum_i w_i l_i
  /// under the weights held before the update.
  double update(std::span<const double> losses) {
    if (losses.size() != cumulative_.size()) throw InvalidInput("loss vector has the wrong length");
    for (double l : losses)
      if (!(l >= 0.0 && l <= 1.0)) throw InvalidInput("expert loss " + std::to_string(l) + " outside [0,1]");
    return apply_losses(losses);
  }

  /// Same update for any finite losses. The regret bound covers only [0,1].
  double apply_losses(std::span<const double> losses) {
    if (losses.size() != cumulative_.size()) throw InvalidInput("loss vector has the wrong length");
    for (double l : losses)
      if (!std::isfinite(l)) throw InvalidInput("expert loss must be finite");
    const auto w = weights();
    double incurred = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      incurred += w[i] * losses[i];
      cumulative_[i] += losses[i];
    }
    algorithm_loss_ += incurred;
    return incurred;
  }

 private:
  double eta_;
  std::vector<double> cumulative_;
  double algorithm_loss_ = 0.0;
};

struct RegretReport {
  double algorithm_loss = 0.0;
  double best_expert_loss = 0.0;
  double regret = 0.0;
  double bound = 0.0;  // eta T + ln(n) / eta
  double margin() const { return bound - regret; }
  bool holds() const { return regret <= bound; }
};

/// Run Weighted Majority over a loss sequence (T rows of n losses) and compare
/// regret with eta T + ln(n)/eta.
inline RegretReport wm_regret_check(const std::vector<std::vector<double>>& losses, std::size_t experts, double eta) {
  WeightedMajority wm(experts, eta);
  for (const auto& row : losses) wm.update(row);
  RegretReport r;
  r.algorithm_loss = wm.algorithm_loss();
  r.best_expert_loss = *std::min_element(wm.cumulative_losses().begin(), wm.cumulative_losses().end());
  r.regret = r.algorithm_loss - r.best_expert_loss;
  const double t = static_cast<double>(losses.size());
  r.bound = eta * t + std::log(static_cast<double>(experts)) / eta;
  return r;
}

}  // namespace lmsr

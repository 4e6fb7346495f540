#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lmsr/assignment.hpp"
#include "lmsr/errors.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/sinkhorn.hpp"

namespace lmsr {

/// PermELearn: online learning over permutations with an n x n doubly
/// stochastic weight matrix. Each round W' = W o e^{-eta L}, then W' is
/// Sinkhorn balanced.
class PermELearn {
 public:
  PermELearn(std::size_t n, double eta, SinkhornOptions sinkhorn = {})
      : eta_(eta), sinkhorn_(sinkhorn), w_(n, n, 1.0 / static_cast<double>(n)) {
    if (n == 0) throw InvalidInput("PermELearn needs n >= 1");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidInput("learning rate must be positive");
  }

  std::size_t size() const { return w_.rows(); }
  double eta() const { return eta_; }
  const RealMatrix& weights() const { return w_; }
  double algorithm_loss() const { return algorithm_loss_; }

  /// Incurs <W, L> under the current weights, then updates. On a Sinkhorn
  /// failure the weights are left untouched and the error propagates.
  double update(const RealMatrix& loss) {
    validate(loss, true);
    return apply_losses(loss);
  }

  /// Same update for any finite losses. The loss bound covers only [0,1].
  double apply_losses(const RealMatrix& loss) {
    validate(loss, false);
    const double incurred = dot(w_, loss);
    RealMatrix tilted = w_;
    for (std::size_t k = 0; k < tilted.data().size(); ++k) tilted.data()[k] *= std::exp(-eta_ * loss.data()[k]);
    w_ = sinkhorn_balance(tilted, sinkhorn_).matrix;
    algorithm_loss_ += incurred;
    return incurred;
  }

 private:
  void validate(const RealMatrix& loss, bool unit_range) const {
    if (loss.rows() != w_.rows() || loss.cols() != w_.cols()) throw InvalidInput("loss matrix dimension mismatch");
    for (double l : loss.data()) {
      if (!std::isfinite(l)) throw InvalidInput("loss entries must be finite");
      if (unit_range && !(l >= 0.0 && l <= 1.0)) throw InvalidInput("loss entry " + std::to_string(l) + " outside [0,1]");
    }
  }

  double eta_;
  SinkhornOptions sinkhorn_;
  RealMatrix w_;
  double algorithm_loss_ = 0.0;
};

struct PermELearnReport {
  double algorithm_loss = 0.0;
  double best_permutation_loss = 0.0;
  double bound = 0.0;  // (n ln n + eta min_sigma L_sigma) / (1 - e^{-eta})
  double margin() const { return bound - algorithm_loss; }
  bool holds() const { return algorithm_loss <= bound; }
};

/// Run PermELearn over T loss matrices and compare its cumulative loss with
/// the bound against the best fixed permutation (found exhaustively).
inline PermELearnReport permelearn_bound_check(const std::vector<RealMatrix>& losses, std::size_t n, double eta,
                                               SinkhornOptions sinkhorn = {}) {
  PermELearn learner(n, eta, sinkhorn);
  RealMatrix cumulative(n, n, 0.0);
  for (const auto& l : losses) {
    learner.update(l);
    for (std::size_t k = 0; k < cumulative.data().size(); ++k) cumulative.data()[k] += l.data()[k];
  }
  PermELearnReport r;
  r.algorithm_loss = learner.algorithm_loss();
  r.best_permutation_loss = best_assignment(cumulative, false).value;
  const double nd = static_cast<double>(n);
  r.bound = (nd * std::log(nd) + eta * r.best_permutation_loss) / (1.0 - std::exp(-eta));
  return r;
}

}  // namespace lmsr

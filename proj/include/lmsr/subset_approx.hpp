#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lmsr/assignment.hpp"
#include "lmsr/errors.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/permelearn.hpp"
#include "lmsr/sinkhorn.hpp"
#include "lmsr/subset_market.hpp"

namespace lmsr {

/// Splits a signed total into ceil(|q|/eps) chunks: full eps chunks with the
/// sign of q, then one remainder chunk. Chunks sum to q.
inline std::vector<double> chunk_quantities(double total, double eps) {
  if (!std::isfinite(total)) throw InvalidInput("trade quantity must be finite");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("chunk size eps must be positive");
  std::vector<double> chunks;
  if (total == 0.0) return chunks;
  const auto count = static_cast<std::size_t>(std::ceil(std::abs(total) / eps - 1e-12));
  const double step = std::copysign(eps, total);
  for (std::size_t k = 0; k + 1 < count; ++k) chunks.push_back(step);
  chunks.push_back(total - step * static_cast<double>(count - 1));
  return chunks;
}

/// A subset-security trade broken into chunks of at most eps shares.
struct ChunkedTrade {
  SubsetSecurity security;
  double total;
  std::vector<double> chunks;

  ChunkedTrade(SubsetSecurity s, double q, double eps)
      : security(std::move(s)), total(q), chunks(chunk_quantities(q, eps)) {}
};

struct ApproxMarketOptions {
  double b = 1.0;
  double eps = 0.01;
  SinkhornOptions sinkhorn{};
};

/// Approximation market maker for subset betting. The price matrix P starts
/// at 1/n everywhere. Each step charges sum_{i,j} P(i,j) q(i,j) at the
/// pre-step prices, then P <- sinkhorn(P o e^{q/b}).
class ApproxMarket {
 public:
  ApproxMarket(std::size_t n, ApproxMarketOptions opt = {})
      : opt_(opt),
        p_(n, n, n ? 1.0 / static_cast<double>(n) : 0.0),
        ledger_(n, n, 0.0) {
    if (n == 0) throw InvalidInput("approximation market needs n >= 1");
    if (!(opt.b > 0.0) || !std::isfinite(opt.b)) throw InvalidInput("liquidity b must be positive");
    if (!(opt.eps > 0.0) || !std::isfinite(opt.eps)) throw InvalidInput("chunk size eps must be positive");
  }

  std::size_t candidates() const { return p_.rows(); }
  double liquidity() const { return opt_.b; }
  double eps() const { return opt_.eps; }
  const RealMatrix& prices() const { return p_; }
  /// Net shares sold per cell; equals the sum of executed chunk quantities.
  const RealMatrix& ledger() const { return ledger_; }
  double collected() const { return collected_; }
  std::size_t steps() const { return steps_; }
  std::size_t sinkhorn_iterations() const { return sinkhorn_iterations_; }

  double price(int i, int j) const { return p_(cell_index(i), cell_index(j)); }

  /// Sum of P over the security's cells.
  double price(const SubsetSecurity& s) const {
    s.validate(static_cast<int>(candidates()));
    double sum = 0.0;
    for (auto [i, j] : s.cells()) sum += p_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return sum;
  }

  /// One time step with a full quantity matrix, every entry in [-eps, eps].
  /// Returns the payment. The state is unchanged if balancing fails.
  double apply_step(const RealMatrix& q) {
    if (q.rows() != p_.rows() || q.cols() != p_.cols()) throw InvalidInput("step matrix dimension mismatch");
    for (double v : q.data())
      if (!(std::abs(v) <= opt_.eps * (1.0 + 1e-12))) throw InvalidInput("step quantity outside [-eps, eps]");
    const double payment = dot(p_, q);
    RealMatrix tilted = p_;
    for (std::size_t k = 0; k < tilted.data().size(); ++k) tilted.data()[k] *= std::exp(q.data()[k] / opt_.b);
    auto balanced = sinkhorn_balance(tilted, opt_.sinkhorn);
    p_ = std::move(balanced.matrix);
    sinkhorn_iterations_ += balanced.iterations;
    for (std::size_t k = 0; k < q.data().size(); ++k) ledger_.data()[k] += q.data()[k];
    collected_ += payment;
    ++steps_;
    return payment;
  }

  /// Chunk and execute a subset-security trade. Each chunk applies the same
  /// quantity to every cell of the security. All or nothing.
  double trade(const SubsetSecurity& s, double total) {
    s.validate(static_cast<int>(candidates()));
    const ChunkedTrade t(s, total, opt_.eps);
    const ApproxMarket saved = *this;
    double paid = 0.0;
    try {
      RealMatrix q(p_.rows(), p_.cols(), 0.0);
      for (double c : t.chunks) {
        for (auto [i, j] : s.cells()) q(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = c;
        paid += apply_step(q);
      }
    } catch (...) {
      *this = saved;
      throw;
    }
    return paid;
  }

  /// max over permutations of the shares owed, from the ledger.
  double worst_case_payout() const { return best_assignment(ledger_, true).value; }
  double worst_case_loss() const { return worst_case_payout() - collected_; }

 private:
  std::size_t cell_index(int k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= p_.rows()) throw InvalidInput("cell index out of range");
    return static_cast<std::size_t>(k);
  }

  ApproxMarketOptions opt_;
  RealMatrix p_;
  RealMatrix ledger_;
  double collected_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t sinkhorn_iterations_ = 0;
};

struct EquivalenceReport {
  std::size_t steps = 0;
  double max_deviation = 0.0;
  bool holds(double tolerance = 1e-8) const { return max_deviation < tolerance; }
};

/// Runs the approximation market and PermELearn side by side with
/// L(i,j) = (2 eps - q(i,j)) / (eta b); compares P and W at every step.
inline EquivalenceReport permelearn_equivalence_check(const std::vector<RealMatrix>& steps, std::size_t n,
                                                      double b, double eps, double eta = 0.0,
                                                      SinkhornOptions sinkhorn = {}) {
  if (eta == 0.0) eta = 2.0 * eps / b;
  if (!(eta >= 2.0 * eps / b * (1.0 - 1e-12)) || !std::isfinite(eta))
    throw InvalidInput("eta must be at least 2 eps / b");
  ApproxMarket market(n, {b, eps, sinkhorn});
  PermELearn learner(n, eta, sinkhorn);
  EquivalenceReport r;
  auto compare = [&] {
    r.max_deviation = std::max(r.max_deviation, max_abs_difference(market.prices(), learner.weights()));
  };
  compare();
  RealMatrix loss(n, n, 0.0);
  for (const auto& q : steps) {
    market.apply_step(q);
    for (std::size_t k = 0; k < loss.data().size(); ++k) loss.data()[k] = (2.0 * eps - q.data()[k]) / (eta * b);
    learner.apply_losses(loss);
    ++r.steps;
    compare();
  }
  return r;
}

struct ApproxLossReport {
  double payout = 0.0;     // max_sigma sum_t sum_i q^t(i, sigma(i))
  double collected = 0.0;  // sum_t sum_{i,j} P^t(i,j) q^t(i,j)
  double loss = 0.0;       // payout - collected
  double kappa = 1.0;      // (2 eps / b) / (1 - e^{-2 eps / b})
  /// kappa b n ln n + (kappa - 1) 2 eps n T, widened by (kappa - 1)(-payout)
  /// when the payout is negative
  double finite_bound = 0.0;
  double limit_bound = 0.0;  // b n ln n
  double margin() const { return finite_bound - loss; }
  bool holds() const { return loss <= finite_bound + 1e-9; }
};

inline double approx_kappa(double b, double eps) {
  const double eta = 2.0 * eps / b;
  return eta / -std::expm1(-eta);
}

/// Worst-case loss of the approximation market over an already chunked
/// step sequence, against the finite-eps bound and its eps -> 0 limit.
inline ApproxLossReport loss_bound_check(const std::vector<RealMatrix>& steps, std::size_t n, double b, double eps,
                                         SinkhornOptions sinkhorn = {}) {
  ApproxMarket market(n, {b, eps, sinkhorn});
  for (const auto& q : steps) market.apply_step(q);
  ApproxLossReport r;
  r.payout = market.worst_case_payout();
  r.collected = market.collected();
  r.loss = r.payout - r.collected;
  r.kappa = approx_kappa(b, eps);
  const double nd = static_cast<double>(n);
  const double t = static_cast<double>(steps.size());
  r.limit_bound = b * nd * std::log(nd);
  r.finite_bound = r.kappa * r.limit_bound + (r.kappa - 1.0) * 2.0 * eps * nd * t;
  if (r.payout < 0.0) r.finite_bound += (r.kappa - 1.0) * -r.payout;
  return r;
}

}  // namespace lmsr

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "lmsr/domain.hpp"
#include "lmsr/errors.hpp"
#include "lmsr/numeric.hpp"
#include "lmsr/outcome_space.hpp"
#include "lmsr/securities.hpp"

namespace lmsr {

// Every market in the library exposes its outcome weights through
// visit_outcomes(f), calling f(outcome, weight) once per outcome of space().
// The generic pricing functions below are written once against that surface:
//
//   cost(q)      = b log sum_w prod_{S : w in S} e^{q_S / b}
//   price(q, S)  = sum_{w in S} weight(w) / sum_w weight(w)

template <class M>
concept EnumeratedMarket = requires(const M& m) {
  typename M::domain_type;
  { m.liquidity() } -> std::convertible_to<double>;
  { m.space() } -> std::convertible_to<OutcomeSpace>;
};

template <class M>
concept LogMarket = EnumeratedMarket<M> && std::same_as<typename M::domain_type, LogDomain>;

template <class M>
concept ExactMarket = EnumeratedMarket<M> && std::same_as<typename M::domain_type, ExactDomain>;

/// log sum_w weight(w).
template <LogMarket M>
double log_partition(const M& m) {
  LogSumExp acc;
  m.visit_outcomes([&](const Outcome&, double lw) { acc.add(lw); });
  return acc.value();
}

template <LogMarket M>
double cost(const M& m) {
  return m.liquidity() * log_partition(m);
}

template <LogMarket M, class Pred>
double price(const M& m, const Pred& pays) {
  LogSumExp all, in;
  m.visit_outcomes([&](const Outcome& o, double lw) {
    all.add(lw);
    if (pays(o)) in.add(lw);
  });
  if (in.empty()) return 0.0;
  return std::min(1.0, std::exp(in.value() - all.value()));
}

/// Per-outcome log weights in enumeration order.
template <LogMarket M>
std::vector<double> outcome_log_weights(const M& m) {
  std::vector<double> lw;
  m.visit_outcomes([&](const Outcome&, double w) { lw.push_back(w); });
  return lw;
}

/// max over outcomes of (shares owed on w) - (payments collected) between two
/// states of the same market. Payments collected equal cost(state) -
/// cost(initial) by path independence.
template <LogMarket M>
double worst_case_loss(const M& state, const M& initial) {
  if (!(state.space() == initial.space())) throw InvalidInput("states live on different outcome spaces");
  const double b = state.liquidity();
  const auto before = outcome_log_weights(initial);
  double owed = -std::numeric_limits<double>::infinity();
  LogSumExp all_now;
  std::size_t k = 0;
  state.visit_outcomes([&](const Outcome&, double lw) {
    owed = std::max(owed, b * (lw - before[k++]));
    all_now.add(lw);
  });
  LogSumExp all_before;
  for (double lw : before) all_before.add(lw);
  const double collected = b * (all_now.value() - all_before.value());
  return owed - collected;
}

template <ExactMarket M>
BigInt total_weight(const M& m) {
  BigInt sum = 0;
  m.visit_outcomes([&](const Outcome&, const BigInt& w) { sum += w; });
  return sum;
}

template <ExactMarket M, class Pred>
BigInt weight_where(const M& m, const Pred& pays) {
  BigInt sum = 0;
  m.visit_outcomes([&](const Outcome& o, const BigInt& w) {
    if (pays(o)) sum += w;
  });
  return sum;
}

template <ExactMarket M, class Pred>
Rational exact_price(const M& m, const Pred& pays) {
  BigInt in = 0, all = 0;
  m.visit_outcomes([&](const Outcome& o, const BigInt& w) {
    all += w;
    if (pays(o)) in += w;
  });
  return Rational(in, all);
}

/// Generic LMSR over an explicitly enumerated outcome space. Holds the
/// per-outcome exposure (total shares paying on each outcome), which is the
/// log-weight table scaled by b.
class Market {
 public:
  using domain_type = LogDomain;

  Market(OutcomeSpace space, double b, EnumerationLimits limits = {}) : space_(space), b_(b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("liquidity b must be positive");
    space_.check_capacity(limits);
    exposure_.assign(static_cast<std::size_t>(space_.size()), 0.0);
  }

  double liquidity() const { return b_; }
  const OutcomeSpace& space() const { return space_; }

  template <class F>
  void visit_outcomes(F&& f) const {
    for_each_outcome(space_, [&](const Outcome& o) { f(o, exposure_[o.index] / b_); });
  }

  double cost() const { return lmsr::cost(*this); }
  double price(const CompoundSecurity& s) const { return lmsr::price(*this, s); }

  /// Payment for buying q shares of s, without changing the state.
  double quote(const CompoundSecurity& s, double q) const {
    LogDomain::validate(q);
    if (q == 0.0) return 0.0;
    LogSumExp after;
    for_each_outcome(space_, [&](const Outcome& o) {
      after.add((exposure_[o.index] + (s.pays_on(o) ? q : 0.0)) / b_);
    });
    return b_ * (after.value() - log_partition(*this));
  }

  /// Buy (q > 0) or sell (q < 0) shares; returns the payment C(after) - C(before).
  double buy(const CompoundSecurity& s, double q) {
    LogDomain::validate(q);
    if (q == 0.0) return 0.0;
    const double before = cost();
    for_each_outcome(space_, [&](const Outcome& o) {
      if (s.pays_on(o)) exposure_[o.index] += q;
    });
    const double paid = cost() - before;
    positions_[s.label()] += q;
    collected_ += paid;
    return paid;
  }

  /// Shares owed on each outcome, in enumeration order.
  const std::vector<double>& exposure() const { return exposure_; }
  /// Outstanding quantity per security label.
  const std::map<std::string, double>& positions() const { return positions_; }
  double collected() const { return collected_; }

 private:
  OutcomeSpace space_;
  double b_;
  std::vector<double> exposure_;
  std::map<std::string, double> positions_;
  double collected_ = 0.0;
};

}  // namespace lmsr

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lmsr/domain.hpp"
#include "lmsr/market.hpp"
#include "lmsr/securities.hpp"

namespace lmsr {

/// LMSR over permutations of n candidates trading pair securities <i>j>
/// ("i ranks above j", sigma(i) < sigma(j)). <i>j> and <j>i> are tracked
/// independently. Only securities with non-neutral holdings are stored, since
/// the others contribute a factor of 1 to every outcome.
template <class Domain>
class BasicPairMarket {
 public:
  using domain_type = Domain;
  using quantity_type = typename Domain::quantity_type;
  using Key = std::pair<int, int>;

  BasicPairMarket(int n, double b, EnumerationLimits limits = {}) : n_(n), b_(b), limits_(limits) {
    if (n < 2) throw InvalidInput("pair market needs n >= 2");
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("liquidity b must be positive");
  }

  int candidates() const { return n_; }
  double liquidity() const { return b_; }
  OutcomeSpace space() const { return OutcomeSpace::permutations(n_); }
  const std::map<Key, quantity_type>& quantities() const { return q_; }

  quantity_type quantity(int i, int j) const {
    check(i, j);
    auto it = q_.find({i, j});
    return it == q_.end() ? Domain::neutral_quantity() : it->second;
  }

  template <class F>
  void visit_outcomes(F&& f) const {
    space().check_capacity(limits_);
    struct Term {
      std::size_t above, below;
      typename Domain::weight_type w;
    };
    std::vector<Term> terms;
    for (const auto& [key, q] : q_)
      terms.push_back({static_cast<std::size_t>(key.first), static_cast<std::size_t>(key.second), Domain::factor(q, b_)});
    for_each_permutation(n_, [&](const Outcome& o) {
      auto acc = Domain::unit();
      for (const auto& t : terms)
        if (o.ranking[t.above] < o.ranking[t.below]) Domain::fold(acc, t.w);
      f(o, acc);
    });
  }

  void apply(int i, int j, const quantity_type& delta) {
    check(i, j);
    Domain::validate(delta);
    auto [it, inserted] = q_.try_emplace({i, j}, Domain::neutral_quantity());
    Domain::accumulate(it->second, delta);
    if (Domain::is_neutral(it->second)) q_.erase(it);
  }

  double price(int i, int j) const
    requires std::same_as<Domain, LogDomain>
  {
    check(i, j);
    return lmsr::price(*this, securities::ranks_above(i, j));
  }

  double cost() const
    requires std::same_as<Domain, LogDomain>
  {
    return lmsr::cost(*this);
  }

  double buy(int i, int j, double q)
    requires std::same_as<Domain, LogDomain>
  {
    LogDomain::validate(q);
    if (q == 0.0) return 0.0;
    const double before = cost();
    apply(i, j, q);
    return cost() - before;
  }

  Rational exact_pair_price(int i, int j) const
    requires std::same_as<Domain, ExactDomain>
  {
    check(i, j);
    return exact_price(*this, securities::ranks_above(i, j));
  }

  /// N(i,j): weight mass on outcomes where i ranks above j.
  BigInt exact_numerator(int i, int j) const
    requires std::same_as<Domain, ExactDomain>
  {
    check(i, j);
    return weight_where(*this, securities::ranks_above(i, j));
  }

  /// D: total weight, so that C = b log D.
  BigInt exact_partition() const
    requires std::same_as<Domain, ExactDomain>
  {
    return total_weight(*this);
  }

 private:
  void check(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw InvalidInput("pair <" + std::to_string(i + 1) + ">" + std::to_string(j + 1) + "> out of range");
    if (i == j) throw InvalidInput("pair security needs two distinct candidates");
  }

  int n_;
  double b_;
  EnumerationLimits limits_;
  std::map<Key, quantity_type> q_;
};

using PairMarket = BasicPairMarket<LogDomain>;
using ExactPairMarket = BasicPairMarket<ExactDomain>;

}  // namespace lmsr

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lmsr/domain.hpp"
#include "lmsr/market.hpp"
#include "lmsr/securities.hpp"

namespace lmsr {

/// Unordered pair of distinct literals, stored lower code first.
struct LiteralPair {
  Literal first, second;

  static LiteralPair make(Literal a, Literal c) {
    if (a == c) throw InvalidInput("a literal cannot be paired with itself");
    return a < c ? LiteralPair{a, c} : LiteralPair{c, a};
  }

  bool satisfied_by(std::uint32_t events) const {
    return first.satisfied_by(events) || second.satisfied_by(events);
  }
  bool is_tautology() const { return first.event == second.event; }

  friend bool operator==(const LiteralPair&, const LiteralPair&) = default;
  friend auto operator<=>(const LiteralPair& a, const LiteralPair& b) {
    if (auto c = a.first <=> b.first; c != 0) return c;
    return a.second <=> b.second;
  }
};

/// 2-CNF formula over N events. Clauses are kept in input order.
class CnfFormula {
 public:
  explicit CnfFormula(int events) : events_(events) {
    if (events < 1) throw InvalidInput("formula needs N >= 1");
  }

  /// Events must be in range; a clause is two distinct, unrepeated literals.
  void add_clause(Literal a, Literal c) {
    for (auto l : {a, c})
      if (l.event < 0 || l.event >= events_)
        throw InvalidInput("literal " + std::to_string(l.signed_index()) + " out of range for N=" +
                           std::to_string(events_));
    const auto pair = LiteralPair::make(a, c);
    if (std::find(clauses_.begin(), clauses_.end(), pair) != clauses_.end())
      throw InvalidInput("duplicate clause (" + std::to_string(a.signed_index()) + " or " +
                         std::to_string(c.signed_index()) + ")");
    clauses_.push_back(pair);
  }

  int events() const { return events_; }
  const std::vector<LiteralPair>& clauses() const { return clauses_; }

  bool satisfied_by(std::uint32_t assignment) const {
    return std::all_of(clauses_.begin(), clauses_.end(),
                       [&](const LiteralPair& p) { return p.satisfied_by(assignment); });
  }

 private:
  int events_;
  std::vector<LiteralPair> clauses_;
};

/// Number of satisfying assignments by enumeration over 2^N.
inline std::uint64_t count_sat_oracle(const CnfFormula& f, const EnumerationLimits& limits = {}) {
  OutcomeSpace::booleans(f.events()).check_capacity(limits);
  // A clause (a or c) fails exactly when both literals are false: the
  // assignment agrees with `fail_value` on the bits in `mask`.
  struct Fail {
    std::uint32_t mask, fail_value;
  };
  std::vector<Fail> fails;
  for (const auto& p : f.clauses()) {
    if (p.is_tautology()) continue;
    Fail x{0, 0};
    for (auto l : {p.first, p.second}) {
      x.mask |= 1u << l.event;
      if (l.negated) x.fail_value |= 1u << l.event;
    }
    fails.push_back(x);
  }
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << f.events();
  for (std::uint64_t a = 0; a < total; ++a) {
    const auto bits = static_cast<std::uint32_t>(a);
    bool ok = true;
    for (const auto& x : fails)
      if ((bits & x.mask) == x.fail_value) {
        ok = false;
        break;
      }
    if (ok) ++count;
  }
  return count;
}

/// LMSR over the 2^N joint outcomes of N binary events trading disjunctions
/// <a or c> of two literals. Conjunction trades are stored in canonical
/// disjunction form: [a and c] = 1 - [!a or !c], so buying q of <a and c> is a
/// sell of q on <!a or !c> plus q of the sure security (a uniform shift).
template <class Domain>
class BasicBoolMarket {
 public:
  using domain_type = Domain;
  using quantity_type = typename Domain::quantity_type;

  BasicBoolMarket(int events, double b, EnumerationLimits limits = {})
      : n_(events), b_(b), limits_(limits), uniform_(Domain::neutral_quantity()) {
    if (events < 1) throw InvalidInput("boolean market needs N >= 1");
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("liquidity b must be positive");
  }

  int events() const { return n_; }
  double liquidity() const { return b_; }
  OutcomeSpace space() const { return OutcomeSpace::booleans(n_); }
  const std::map<LiteralPair, quantity_type>& quantities() const { return q_; }
  const quantity_type& uniform_quantity() const { return uniform_; }

  quantity_type quantity(Literal a, Literal c) const {
    auto it = q_.find(key(a, c));
    return it == q_.end() ? Domain::neutral_quantity() : it->second;
  }

  template <class F>
  void visit_outcomes(F&& f) const {
    space().check_capacity(limits_);
    struct Term {
      std::uint32_t mask, fail_value;
      typename Domain::weight_type w;
    };
    std::vector<Term> terms;
    for (const auto& [p, q] : q_) {
      Term t{0, 0, Domain::factor(q, b_)};
      if (p.is_tautology()) {
        t.mask = 0;
        t.fail_value = 1;  // never fails
      } else {
        for (auto l : {p.first, p.second}) {
          t.mask |= 1u << l.event;
          if (l.negated) t.fail_value |= 1u << l.event;
        }
      }
      terms.push_back(std::move(t));
    }
    const auto base = Domain::factor(uniform_, b_);
    for_each_assignment(n_, [&](const Outcome& o) {
      auto acc = Domain::unit();
      Domain::fold(acc, base);
      for (const auto& t : terms)
        if ((o.events & t.mask) != t.fail_value) Domain::fold(acc, t.w);
      f(o, acc);
    });
  }

  void apply_disjunction(Literal a, Literal c, const quantity_type& delta) {
    Domain::validate(delta);
    auto [it, inserted] = q_.try_emplace(key(a, c), Domain::neutral_quantity());
    Domain::accumulate(it->second, delta);
    if (Domain::is_neutral(it->second)) q_.erase(it);
  }

  // ---- log-domain pricing -------------------------------------------------

  /// Price of <a or c>. a and c may share an event; <X or !X> prices at 1.
  double price_disjunction(Literal a, Literal c) const
    requires std::same_as<Domain, LogDomain>
  {
    check(a);
    check(c);
    return lmsr::price(*this, securities::disjunction(a, c));
  }

  /// Price of <a and c> = 1 - price(<!a or !c>).
  double price_conjunction(Literal a, Literal c) const
    requires std::same_as<Domain, LogDomain>
  {
    return 1.0 - price_disjunction(!a, !c);
  }

  double cost() const
    requires std::same_as<Domain, LogDomain>
  {
    return lmsr::cost(*this);
  }

  double buy_disjunction(Literal a, Literal c, double q)
    requires std::same_as<Domain, LogDomain>
  {
    LogDomain::validate(q);
    (void)key(a, c);
    if (q == 0.0) return 0.0;
    const double before = cost();
    apply_disjunction(a, c, q);
    return cost() - before;
  }

  double buy_conjunction(Literal a, Literal c, double q)
    requires std::same_as<Domain, LogDomain>
  {
    LogDomain::validate(q);
    (void)key(!a, !c);
    if (q == 0.0) return 0.0;
    const double before = cost();
    apply_disjunction(!a, !c, -q);
    uniform_ += q;
    return cost() - before;
  }

  // ---- exact pricing --------------------------------------------------------

  Rational exact_disjunction_price(Literal a, Literal c) const
    requires std::same_as<Domain, ExactDomain>
  {
    check(a);
    check(c);
    return exact_price(*this, securities::disjunction(a, c));
  }

  BigInt exact_partition() const
    requires std::same_as<Domain, ExactDomain>
  {
    return total_weight(*this);
  }

 private:
  void check(Literal l) const {
    if (l.event < 0 || l.event >= n_)
      throw InvalidInput("literal " + std::to_string(l.signed_index()) + " out of range for N=" +
                         std::to_string(n_));
  }

  LiteralPair key(Literal a, Literal c) const {
    check(a);
    check(c);
    return LiteralPair::make(a, c);
  }

  int n_;
  double b_;
  EnumerationLimits limits_;
  std::map<LiteralPair, quantity_type> q_;
  quantity_type uniform_;
};

using BoolMarket = BasicBoolMarket<LogDomain>;
using ExactBoolMarket = BasicBoolMarket<ExactDomain>;

}  // namespace lmsr

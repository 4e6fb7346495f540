#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "lmsr/bool_market.hpp"
#include "lmsr/errors.hpp"
#include "lmsr/io.hpp"
#include "lmsr/market.hpp"
#include "lmsr/pair_market.hpp"
#include "lmsr/subset_approx.hpp"
#include "lmsr/subset_market.hpp"

namespace lmsr {

/// Fixed 9-decimal rendering; negative zero prints as zero.
inline std::string fixed9(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s(buf);
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

enum class Family { subset, pair, boolean, generic, approx };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::subset: return "subset";
    case Family::pair: return "pair";
    case Family::boolean: return "boolean";
    case Family::generic: return "generic";
    case Family::approx: return "approx";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "subset") return Family::subset;
  if (s == "pair") return Family::pair;
  if (s == "boolean") return Family::boolean;
  if (s == "generic") return Family::generic;
  if (s == "approx") return Family::approx;
  throw InvalidInput("unknown market family '" + s + "'");
}

struct MarketDescriptor {
  Family family = Family::subset;
  int size = 0;  // candidates; events for boolean; outcomes for generic
  double b = 1.0;
  double eps = 0.01;
  double delta = 1e-9;
  std::optional<std::uint64_t> seed;
};

struct ScenarioTrade {
  std::string security;
  double quantity;
  std::size_t line;
};

struct Scenario {
  MarketDescriptor market;
  std::vector<ScenarioTrade> trades;
};

/// Header "market <family> n=<k> b=<b> [eps=..] [delta=..] [seed=..]" (N= is
/// accepted for boolean), then one "<security> <quantity>" per line.
inline Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  bool have_header = false;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!have_header) {
      const auto toks = text::split_ws(body);
      if (toks.size() < 2 || toks[0] != "market") throw ParseError(lineno, "expected 'market <family> key=value ...'");
      try {
        sc.market.family = parse_family(toks[1]);
      } catch (const InvalidInput& e) {
        throw ParseError(lineno, e.what());
      }
      bool have_size = false;
      for (std::size_t k = 2; k < toks.size(); ++k) {
        const auto eq = toks[k].find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key=value, got '" + toks[k] + "'");
        const auto key = toks[k].substr(0, eq);
        const auto val = toks[k].substr(eq + 1);
        if (key == "n" || key == "N") {
          const auto v = text::parse_int(val, lineno, "size");
          if (v < 1 || v > 64) throw ParseError(lineno, "size out of range");
          sc.market.size = static_cast<int>(v);
          have_size = true;
        } else if (key == "b") {
          sc.market.b = text::parse_double(val, lineno, "for b");
        } else if (key == "eps") {
          sc.market.eps = text::parse_double(val, lineno, "for eps");
        } else if (key == "delta") {
          sc.market.delta = text::parse_double(val, lineno, "for delta");
        } else if (key == "seed") {
          const auto v = text::parse_int(val, lineno, "seed");
          if (v < 0) throw ParseError(lineno, "seed must be nonnegative");
          sc.market.seed = static_cast<std::uint64_t>(v);
        } else {
          throw ParseError(lineno, "unknown header key '" + key + "'");
        }
      }
      if (!have_size) throw ParseError(lineno, "header needs n=<size>");
      if (!(sc.market.b > 0.0) || !std::isfinite(sc.market.b)) throw ParseError(lineno, "b must be positive");
      if (!(sc.market.eps > 0.0)) throw ParseError(lineno, "eps must be positive");
      if (!(sc.market.delta > 0.0)) throw ParseError(lineno, "delta must be positive");
      have_header = true;
      continue;
    }
    const auto cut = body.find_last_of(" \t");
    if (cut == std::string_view::npos) throw ParseError(lineno, "expected '<security> <quantity>'");
    const double q = text::parse_double(body.substr(cut + 1), lineno, "quantity");
    if (!std::isfinite(q)) throw ParseError(lineno, "quantity must be finite");
    const std::string spec(text::trim(body.substr(0, cut)));
    try {
      (void)parse_security(spec);
    } catch (const InvalidInput& e) {
      throw ParseError(lineno, e.what());
    }
    sc.trades.push_back({spec, q, lineno});
  }
  if (!have_header) throw ParseError(std::max<std::size_t>(lineno, 1), "missing market header");
  return sc;
}

struct ReportRow {
  std::size_t step;
  std::string security;
  double quantity;
  double payment;
  double price_before;
  double price_after;
  // approx family only
  std::size_t chunks = 0;
  double deviation = 0.0;
  double collected = 0.0;
};

struct RunReport {
  Family family = Family::subset;
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  bool passed = true;

  /// Per-trade CSV, then "# key=value" summary lines.
  std::string to_csv() const {
    std::ostringstream out;
    const bool approx = family == Family::approx;
    out << "step,security,quantity,payment,price_before,price_after";
    if (approx) out << ",chunks,max_deviation,collected";
    out << "\n";
    for (const auto& r : rows) {
      out << r.step << "," << text::csv_field(r.security) << "," << fixed9(r.quantity) << "," << fixed9(r.payment)
          << "," << fixed9(r.price_before) << "," << fixed9(r.price_after);
      if (approx) out << "," << r.chunks << "," << fixed9(r.deviation) << "," << fixed9(r.collected);
      out << "\n";
    }
    out << "# summary\n";
    for (const auto& [k, v] : summary) out << "# " << k << "=" << v << "\n";
    return out.str();
  }
};

/// A live market of the family a scenario header names. Securities are
/// given as spec strings and checked against the family.
class MarketSession {
 public:
  using Engine = std::variant<SubsetMarket, PairMarket, BoolMarket, Market, ApproxMarket>;

  explicit MarketSession(const MarketDescriptor& d, const EnumerationLimits& limits = {})
      : desc_(d), engine_(make(d, limits)), initial_(engine_) {}

  const MarketDescriptor& descriptor() const { return desc_; }
  const Engine& engine() const { return engine_; }
  bool is_approx() const { return std::holds_alternative<ApproxMarket>(engine_); }

  double price(const std::string& spec) const {
    const auto s = parse_security(spec);
    return std::visit([&](const auto& m) { return price_on(m, s); }, engine_);
  }

  /// Executes the trade; returns the payment.
  double buy(const std::string& spec, double q) {
    const auto s = parse_security(spec);
    return std::visit([&](auto& m) { return buy_on(m, s, q); }, engine_);
  }

  /// Payment the trade would cost, without executing it.
  double quote(const std::string& spec, double q) const {
    MarketSession copy = *this;
    return copy.buy(spec, q);
  }

  /// Cost function value. The approximation market has none; it reports
  /// the payments collected so far.
  double cost() const {
    return std::visit(
        [](const auto& m) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ApproxMarket>)
            return m.collected();
          else
            return lmsr::cost(m);
        },
        engine_);
  }

  /// Worst-case market maker loss relative to the opening state.
  double worst_case_loss() const {
    return std::visit(
        [&](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, ApproxMarket>)
            return m.worst_case_loss();
          else
            return lmsr::worst_case_loss(m, std::get<M>(initial_));
        },
        engine_);
  }

  double log_outcomes() const {
    return std::visit(
        [](const auto& m) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ApproxMarket>)
            return std::lgamma(static_cast<double>(m.candidates()) + 1.0);
          else
            return m.space().log_size();
        },
        engine_);
  }

 private:
  static Engine make(const MarketDescriptor& d, const EnumerationLimits& limits) {
    switch (d.family) {
      case Family::subset: return SubsetMarket(d.size, d.b, limits);
      case Family::pair: return PairMarket(d.size, d.b, limits);
      case Family::boolean: return BoolMarket(d.size, d.b, limits);
      case Family::generic: return Market(OutcomeSpace::flat(d.size), d.b, limits);
      case Family::approx:
        return ApproxMarket(static_cast<std::size_t>(d.size), {d.b, d.eps, {d.delta, 10000}});
    }
    throw InvalidInput("unknown family");
  }

  template <class Spec>
  static const Spec& as(const SecuritySpec& s, Family f) {
    if (const auto* p = std::get_if<Spec>(&s)) return *p;
    throw InvalidInput(std::string("security is not valid for the ") + to_string(f) + " family");
  }

  static CompoundSecurity generic_security(const GenericSpec& g, int outcomes) {
    if (g.all) return securities::sure();
    for (auto k : g.outcomes)
      if (k >= static_cast<std::uint64_t>(outcomes)) throw InvalidInput("outcome index out of range");
    return g.outcomes.size() == 1 ? securities::elementary(g.outcomes[0]) : securities::outcome_set(g.outcomes);
  }

  static double price_on(const SubsetMarket& m, const SecuritySpec& s) {
    return m.price(as<SubsetSpec>(s, Family::subset).security);
  }
  static double price_on(const ApproxMarket& m, const SecuritySpec& s) {
    return m.price(as<SubsetSpec>(s, Family::approx).security);
  }
  static double price_on(const PairMarket& m, const SecuritySpec& s) {
    const auto& p = as<PairSpec>(s, Family::pair);
    return m.price(p.above, p.below);
  }
  static double price_on(const BoolMarket& m, const SecuritySpec& s) {
    const auto& p = as<BoolSpec>(s, Family::boolean);
    return p.conjunction ? m.price_conjunction(p.a, p.c) : m.price_disjunction(p.a, p.c);
  }
  static double price_on(const Market& m, const SecuritySpec& s) {
    return m.price(generic_security(as<GenericSpec>(s, Family::generic), m.space().dimension()));
  }

  static double buy_on(SubsetMarket& m, const SecuritySpec& s, double q) {
    return m.buy(as<SubsetSpec>(s, Family::subset).security, q);
  }
  static double buy_on(ApproxMarket& m, const SecuritySpec& s, double q) {
    return m.trade(as<SubsetSpec>(s, Family::approx).security, q);
  }
  static double buy_on(PairMarket& m, const SecuritySpec& s, double q) {
    const auto& p = as<PairSpec>(s, Family::pair);
    return m.buy(p.above, p.below, q);
  }
  static double buy_on(BoolMarket& m, const SecuritySpec& s, double q) {
    const auto& p = as<BoolSpec>(s, Family::boolean);
    return p.conjunction ? m.buy_conjunction(p.a, p.c, q) : m.buy_disjunction(p.a, p.c, q);
  }
  static double buy_on(Market& m, const SecuritySpec& s, double q) {
    return m.buy(generic_security(as<GenericSpec>(s, Family::generic), m.space().dimension()), q);
  }

  MarketDescriptor desc_;
  Engine engine_;
  Engine initial_;
};

/// Replays trades one at a time. Any error names the scenario line.
inline MarketSession replay(const Scenario& sc, const EnumerationLimits& limits = {},
                            std::vector<ReportRow>* rows = nullptr) {
  MarketSession session(sc.market, limits);
  std::size_t step = 0;
  for (const auto& t : sc.trades) {
    ReportRow row{++step, t.security, t.quantity, 0.0, 0.0, 0.0};
    try {
      row.price_before = session.price(t.security);
      if (session.is_approx()) row.chunks = chunk_quantities(t.quantity, sc.market.eps).size();
      row.payment = session.buy(t.security, t.quantity);
      row.price_after = session.price(t.security);
    } catch (const InvalidInput& e) {
      throw ParseError(t.line, e.what());
    }
    if (const auto* a = std::get_if<ApproxMarket>(&session.engine())) {
      row.deviation = doubly_stochastic_deviation(a->prices());
      row.collected = a->collected();
    }
    if (rows) rows->push_back(row);
  }
  return session;
}

/// Replays a scenario and checks payments against the cost function (or
/// ledger) and the worst-case loss against its bound.
inline RunReport run_scenario(const Scenario& sc, const EnumerationLimits& limits = {}) {
  const auto& m = sc.market;
  RunReport rep;
  rep.family = m.family;
  const MarketSession opening(m, limits);
  const auto session = replay(sc, limits, &rep.rows);
  double total = 0.0;
  for (const auto& r : rep.rows) total += r.payment;
  const double loss = session.worst_case_loss();
  const auto tol = [&](double v) { return 1e-9 * std::max(1.0, std::abs(v)); };

  if (const auto* a = std::get_if<ApproxMarket>(&session.engine())) {
    const double payout = a->worst_case_payout();
    const double kappa = approx_kappa(m.b, m.eps);
    const double nd = static_cast<double>(m.size);
    const double limit = m.b * nd * std::log(nd);
    double bound = kappa * limit + (kappa - 1.0) * 2.0 * m.eps * nd * static_cast<double>(a->steps());
    if (payout < 0.0) bound += (kappa - 1.0) * -payout;
    const double deviation = doubly_stochastic_deviation(a->prices());
    const bool consistent = std::abs(total - a->collected()) <= tol(total);
    const bool within = loss <= bound + 1e-9;
    const bool balanced = deviation <= m.delta;
    rep.passed = consistent && within && balanced;
    rep.summary = {{"family", "approx"},
                   {"size", std::to_string(m.size)},
                   {"b", fixed9(m.b)},
                   {"eps", fixed9(m.eps)},
                   {"delta", fixed9(m.delta)},
                   {"trades", std::to_string(rep.rows.size())},
                   {"steps", std::to_string(a->steps())},
                   {"total_payment", fixed9(total)},
                   {"worst_case_payout", fixed9(payout)},
                   {"worst_case_loss", fixed9(loss)},
                   {"loss_bound", fixed9(bound)},
                   {"limit_bound", fixed9(limit)},
                   {"max_deviation", fixed9(deviation)},
                   {"payments_match_ledger", consistent ? "pass" : "fail"},
                   {"loss_within_bound", within ? "pass" : "fail"},
                   {"prices_balanced", balanced ? "pass" : "fail"}};
  } else {
    const double c0 = opening.cost();
    const double c1 = session.cost();
    const double bound = m.b * session.log_outcomes();
    const bool consistent = std::abs((c1 - c0) - total) <= tol(total);
    const bool within = loss <= bound + 1e-9;
    rep.passed = consistent && within;
    rep.summary = {{"family", to_string(m.family)},
                   {"size", std::to_string(m.size)},
                   {"b", fixed9(m.b)},
                   {"trades", std::to_string(rep.rows.size())},
                   {"initial_cost", fixed9(c0)},
                   {"final_cost", fixed9(c1)},
                   {"total_payment", fixed9(total)},
                   {"worst_case_loss", fixed9(loss)},
                   {"loss_bound", fixed9(bound)},
                   {"payments_match_cost", consistent ? "pass" : "fail"},
                   {"loss_within_bound", within ? "pass" : "fail"}};
  }
  if (m.seed) rep.summary.insert(rep.summary.begin() + 3, {"seed", std::to_string(*m.seed)});
  rep.summary.emplace_back("result", rep.passed ? "pass" : "fail");
  return rep;
}

}  // namespace lmsr

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmsr/bool_market.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/numeric.hpp"
#include "lmsr/pair_market.hpp"
#include "lmsr/partial_order.hpp"
#include "lmsr/permanent.hpp"
#include "lmsr/subset_market.hpp"

// Counting procedures that recover #P-hard counts from LMSR prices or costs.
//
// Each runs in one of three modes:
//   prices - floating markets, counts recovered by telescoping price ratios
//   cost   - floating markets, counts recovered from a single cost value
//   exact  - integer-weight markets, prices as exact rationals; authoritative
//
// In exact mode the telescoped value is also checked against the market's
// exact partition function.

namespace lmsr {

enum class ReductionMode { prices, cost, exact };

inline const char* to_string(ReductionMode m) {
  switch (m) {
    case ReductionMode::prices: return "prices";
    case ReductionMode::cost: return "cost";
    case ReductionMode::exact: return "exact";
  }
  return "?";
}

struct ReductionOptions {
  ReductionMode mode = ReductionMode::exact;
  double b = 1.0;
  /// Floating modes floor value*(1 + guard) to absorb rounding.
  double floor_guard = 1e-6;
  EnumerationLimits limits{};
};

struct TraceRow {
  int period = 0;
  std::string security;
  double quantity = 0.0;
  double price_before = 0.0;
  double price_after = 0.0;
  std::string denominator;  // D_t (decimal in exact mode, %.9e in floating modes)
};

struct ReductionTrace {
  ReductionMode mode = ReductionMode::exact;
  std::vector<TraceRow> rows;
  std::vector<double> price_ratios;
};

struct ReductionResult {
  std::uint64_t count = 0;
  /// log of the value the count is extracted from (per(B) or D_k).
  double log_value = 0.0;
  /// Exact mode only: that value, and D_k - count * M^k for the
  /// linear-extension and #2-SAT constructions.
  std::optional<BigInt> exact_value;
  std::optional<BigInt> remainder;
  ReductionTrace trace;
};

/// CSV trace: period,security,quantity,price_before,price_after,D_t
inline std::string trace_csv(const ReductionTrace& t) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(9);
  os << "period,security,quantity,price_before,price_after,D_t\n";
  for (const auto& r : t.rows)
    os << r.period << ',' << '"' << r.security << '"' << ',' << r.quantity << ',' << r.price_before << ','
       << r.price_after << ',' << r.denominator << '\n';
  return os.str();
}

/// D_1 after buying b ln n! of one pair security from the zero state:
/// ((n!)^2 + n!)/2.
inline BigInt pair_first_denominator(int n) {
  const BigInt f = factorial(static_cast<unsigned>(n));
  return (f * f + f) / 2;
}

/// D_1 after buying b ln 2^N of one disjunction over two distinct events:
/// 3 * 2^{2N-2} + 2^{N-2}. A tautological clause (X or !X) gives 2^{2N}.
inline BigInt boolean_first_denominator(int events, bool tautology = false) {
  if (events < 1) throw InvalidInput("N >= 1 required");
  const auto n = static_cast<unsigned>(events);
  if (tautology) return pow2(2 * n);
  if (events < 2) throw InvalidInput("a clause over two distinct events needs N >= 2");
  return 3 * pow2(2 * n - 2) + pow2(n - 2);
}

namespace detail {

inline std::string format_log_value(double log_v) {
  std::ostringstream os;
  os.precision(9);
  os << std::scientific << std::exp(log_v);
  return os.str();
}

/// count from D_k and per-period multiplier M in exact arithmetic.
/// Floor of D_k / M^k, except that D_k == M^k (k >= 1) is the all-violating
/// boundary where every outcome misses exactly one purchased security: the
/// count is 0 there (a single satisfying outcome would add at least one unit
/// of non-satisfying mass on top).
inline std::uint64_t extract_exact(const BigInt& d, const BigInt& m, int periods, BigInt& remainder) {
  BigInt scale = 1;
  for (int t = 0; t < periods; ++t) scale *= m;
  BigInt count = d / scale;
  remainder = d - count * scale;
  if (periods >= 1 && d == scale) {
    count = 0;
    remainder = d;
  }
  return count.convert_to<std::uint64_t>();
}

/// Floating counterpart. `outcomes` = |Omega|, used to decide whether the
/// boundary case above is distinguishable at the guard's resolution.
inline std::uint64_t extract_floating(double log_d, double log_m, int periods, double outcomes, double guard) {
  const double x = std::exp(log_d - periods * log_m);
  if (!std::isfinite(x)) throw DegenerateInstance("extracted count is not finite");
  if (periods >= 1 && std::abs(x - 1.0) <= guard) {
    // count 1 would put x at least (|Omega| - 1) / M^k above 1
    const double min_gap = std::exp(std::log(outcomes - 1.0) - periods * log_m);
    if (min_gap > 2.0 * guard) return 0;
    throw DegenerateInstance("floating mode cannot separate count 0 from 1 at this size; use exact mode");
  }
  return static_cast<std::uint64_t>(std::floor(x * (1.0 + guard)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Permanent of a 0-1 matrix through a subset-betting market.

/// Share encoding for a 0-1 matrix A with N = n! + 1: q_ij = b ln N where
/// a_ij = 0 and b ln(N+1) where a_ij = 1, so that e^{q_ij/b} = N or N+1 and
/// per(B) = per(A) (mod N).
inline Matrix<BigInt> permanent_encoding_weights(const Matrix<int>& a) {
  if (!a.is_square()) throw InvalidInput("permanent reduction needs a square matrix");
  const BigInt big_n = factorial(static_cast<unsigned>(a.rows())) + 1;
  Matrix<BigInt> w(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    const int v = a.data()[k];
    if (v != 0 && v != 1) throw InvalidInput("permanent reduction needs a 0-1 matrix");
    w.data()[k] = v ? big_n + 1 : big_n;
  }
  return w;
}

inline RealMatrix permanent_encoding_shares(const Matrix<int>& a, double b) {
  const auto w = permanent_encoding_weights(a);
  return w.map([b](const BigInt& x) { return b * log_bigint(x); });
}

/// per(A) by telescoping prices of <1|1> across markets on the trailing
/// blocks B_0 = B, B_1, ..., B_{n-2}:
///   p_{1,1}(Q_m) / b_{m,m} = per(B_{m+1}) / per(B_m)
/// so per(B) = b_{n-1,n-1} / prod_m (p_{1,1}(Q_m) / b_{m,m}).
inline ReductionResult permanent_via_market(const Matrix<int>& a, ReductionOptions opt = {}) {
  const int n = static_cast<int>(a.rows());
  if (n < 1) throw InvalidInput("empty matrix");
  const auto weights = permanent_encoding_weights(a);
  const BigInt big_n = factorial(static_cast<unsigned>(n)) + 1;
  ReductionResult res;
  res.trace.mode = opt.mode;

  const auto last = static_cast<std::size_t>(n - 1);
  if (opt.mode == ReductionMode::exact) {
    Rational product = 1;  // prod_m per(B_{m+1}) / per(B_m)
    std::vector<Rational> ratios;
    for (int m = 0; m + 1 < n; ++m) {
      ExactSubsetMarket sub(n - m, opt.b, opt.limits);
      sub.set_quantities(weights.trailing(static_cast<std::size_t>(m)));
      const Rational p = sub.exact_cell_price(0, 0);
      if (p == 0) throw DegenerateInstance("zero intermediate price");
      const Rational ratio = p / Rational(weights(static_cast<std::size_t>(m), static_cast<std::size_t>(m)));
      ratios.push_back(ratio);
      product *= ratio;
      TraceRow row;
      row.period = m + 1;
      row.security = "<" + std::to_string(m + 1) + "|" + std::to_string(m + 1) + ">";
      row.quantity = opt.b * log_bigint(weights(static_cast<std::size_t>(m), static_cast<std::size_t>(m)));
      row.price_before = row.price_after = to_double(p);
      res.trace.rows.push_back(row);
      res.trace.price_ratios.push_back(to_double(ratio));
    }
    const Rational per_b = Rational(weights(last, last)) / product;
    if (boost::multiprecision::denominator(per_b) != 1)
      throw std::logic_error("telescoped permanent is not an integer");
    const BigInt value = boost::multiprecision::numerator(per_b);
    ExactSubsetMarket full(n, opt.b, opt.limits);
    full.set_quantities(weights);
    if (full.exact_partition() != value) throw std::logic_error("telescoped permanent disagrees with partition");
    // per(B_m) for the trace, walking back down from per(B)
    Rational running = Rational(value);
    for (std::size_t m = 0; m < res.trace.rows.size(); ++m) {
      res.trace.rows[m].denominator = boost::multiprecision::numerator(running).str();
      running *= ratios[m];
    }
    res.exact_value = value;
    res.log_value = log_bigint(value);
    res.count = BigInt(value % big_n).convert_to<std::uint64_t>();
    return res;
  }

  const auto shares = permanent_encoding_shares(a, opt.b);
  double log_per = 0.0;
  if (opt.mode == ReductionMode::cost) {
    SubsetMarket market(n, opt.b, opt.limits);
    market.set_quantities(shares);
    log_per = market.cost(SubsetMethod::enumeration) / opt.b;
    TraceRow row;
    row.period = 1;
    row.security = "C(Q)";
    row.denominator = detail::format_log_value(log_per);
    res.trace.rows.push_back(row);
  } else {
    double log_ratio_sum = 0.0;
    std::vector<double> log_ratios;
    for (int m = 0; m + 1 < n; ++m) {
      SubsetMarket sub(n - m, opt.b, opt.limits);
      sub.set_quantities(shares.trailing(static_cast<std::size_t>(m)));
      const double p = sub.cell_price(0, 0, SubsetMethod::enumeration);
      if (!(p > 0.0)) throw DegenerateInstance("zero intermediate price");
      const double log_ratio =
          std::log(p) - log_bigint(weights(static_cast<std::size_t>(m), static_cast<std::size_t>(m)));
      log_ratios.push_back(log_ratio);
      log_ratio_sum += log_ratio;
      TraceRow row;
      row.period = m + 1;
      row.security = "<" + std::to_string(m + 1) + "|" + std::to_string(m + 1) + ">";
      row.quantity = shares(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
      row.price_before = row.price_after = p;
      res.trace.rows.push_back(row);
      res.trace.price_ratios.push_back(std::exp(log_ratio));
    }
    log_per = log_bigint(weights(last, last)) - log_ratio_sum;
    double running = log_per;
    for (std::size_t m = 0; m < res.trace.rows.size(); ++m) {
      res.trace.rows[m].denominator = detail::format_log_value(running);
      running += log_ratios[m];
    }
  }
  res.log_value = log_per;
  // per(B) mod N needs per(B) as an exact integer
  const long double value = std::exp(static_cast<long double>(log_per));
  if (!(value < 0x1p62L))
    throw DegenerateInstance("per(B) exceeds floating integer precision; use exact mode");
  const auto rounded = static_cast<unsigned long long>(std::llround(value));
  res.count = rounded % big_n.convert_to<unsigned long long>();
  return res;
}

/// per(A) from one cost evaluation: C(Q) = b log per(B).
inline ReductionResult permanent_via_cost(const Matrix<int>& a, ReductionOptions opt = {}) {
  const int n = static_cast<int>(a.rows());
  if (n < 1) throw InvalidInput("empty matrix");
  if (opt.mode == ReductionMode::exact) {
    const auto weights = permanent_encoding_weights(a);
    ExactSubsetMarket market(n, opt.b, opt.limits);
    market.set_quantities(weights);
    const BigInt value = market.exact_partition();
    const BigInt big_n = factorial(static_cast<unsigned>(n)) + 1;
    ReductionResult res;
    res.trace.mode = opt.mode;
    TraceRow row;
    row.period = 1;
    row.security = "C(Q)";
    row.denominator = value.str();
    res.trace.rows.push_back(row);
    res.exact_value = value;
    res.log_value = log_bigint(value);
    res.count = BigInt(value % big_n).convert_to<std::uint64_t>();
    return res;
  }
  opt.mode = ReductionMode::cost;
  return permanent_via_market(a, opt);
}

// ---------------------------------------------------------------------------
// Linear extensions through a pair-betting market.

/// Runs one period per covering pair (i_t, j_t), buying b ln n! shares of
/// <i_t > j_t>. With D_1 = ((n!)^2 + n!)/2 and
///   p^t / p^{t-1} = n! D_{t-1} / D_t
/// the final D_k is telescoped from prices, and NE(P) = floor(D_k / (n!)^k).
inline ReductionResult linear_extensions_via_market(const PartialOrder& order, ReductionOptions opt = {}) {
  const int n = order.size();
  OutcomeSpace::permutations(n).check_capacity(opt.limits);
  const auto pairs = order.covering_pairs();
  const int k = static_cast<int>(pairs.size());
  const BigInt m = factorial(static_cast<unsigned>(n));
  const double log_m = log_bigint(m);
  const double share_q = opt.b * log_m;
  ReductionResult res;
  res.trace.mode = opt.mode;

  if (k == 0 || n == 1) {
    // nothing to buy: D_0 = n!
    res.count = m.convert_to<std::uint64_t>();
    res.log_value = log_m;
    if (opt.mode == ReductionMode::exact) {
      res.exact_value = m;
      res.remainder = BigInt(0);
    }
    return res;
  }

  if (opt.mode == ReductionMode::exact) {
    ExactPairMarket market(n, opt.b, opt.limits);
    Rational d = 0;
    for (int t = 0; t < k; ++t) {
      const auto [i, j] = pairs[static_cast<std::size_t>(t)];
      const Rational before = market.exact_pair_price(i, j);
      market.apply(i, j, m);
      const Rational after = market.exact_pair_price(i, j);
      if (t == 0) {
        d = Rational(pair_first_denominator(n));
      } else {
        if (after == 0) throw DegenerateInstance("zero intermediate price");
        const Rational ratio = before / after;
        res.trace.price_ratios.push_back(to_double(ratio));
        d = Rational(m) * d * ratio;
      }
      if (boost::multiprecision::denominator(d) != 1) throw std::logic_error("telescoped D_t is not an integer");
      TraceRow row{t + 1, securities::ranks_above(i, j).label(), share_q, to_double(before), to_double(after),
                   boost::multiprecision::numerator(d).str()};
      res.trace.rows.push_back(row);
    }
    const BigInt dk = boost::multiprecision::numerator(d);
    if (market.exact_partition() != dk) throw std::logic_error("telescoped D_k disagrees with partition");
    BigInt rem;
    res.count = detail::extract_exact(dk, m, k, rem);
    res.exact_value = dk;
    res.remainder = rem;
    res.log_value = log_bigint(dk);
    return res;
  }

  PairMarket market(n, opt.b, opt.limits);
  double log_d = 0.0;
  for (int t = 0; t < k; ++t) {
    const auto [i, j] = pairs[static_cast<std::size_t>(t)];
    const double before = market.price(i, j);
    market.buy(i, j, share_q);
    const double after = market.price(i, j);
    if (opt.mode == ReductionMode::prices) {
      if (t == 0) {
        log_d = log_bigint(pair_first_denominator(n));
      } else {
        if (!(after > 0.0) || !(before > 0.0)) throw DegenerateInstance("zero intermediate price");
        res.trace.price_ratios.push_back(before / after);
        log_d = log_m + log_d + std::log(before) - std::log(after);
      }
    } else {
      log_d = market.cost() / opt.b;
    }
    res.trace.rows.push_back({t + 1, securities::ranks_above(i, j).label(), share_q, before, after,
                              detail::format_log_value(log_d)});
  }
  res.log_value = log_d;
  res.count = detail::extract_floating(log_d, log_m, k, std::exp(log_m), opt.floor_guard);
  return res;
}

// ---------------------------------------------------------------------------
// #2-SAT through a Boolean betting market.

/// One period per clause, buying b ln 2^N shares of the clause's disjunction.
/// D_1 = 3 * 2^{2N-2} + 2^{N-2} and p^t / p^{t-1} = 2^N D_{t-1} / D_t.
/// The satisfying-assignment count is floor(D_k / 2^{kN}).
inline ReductionResult count_2sat_via_market(const CnfFormula& f, ReductionOptions opt = {}) {
  const int events = f.events();
  OutcomeSpace::booleans(events).check_capacity(opt.limits);
  const auto& clauses = f.clauses();
  const int k = static_cast<int>(clauses.size());
  const BigInt m = pow2(static_cast<unsigned>(events));
  const double log_m = events * std::log(2.0);
  const double share_q = opt.b * log_m;
  ReductionResult res;
  res.trace.mode = opt.mode;

  if (k == 0) {
    res.count = m.convert_to<std::uint64_t>();
    res.log_value = log_m;
    if (opt.mode == ReductionMode::exact) {
      res.exact_value = m;
      res.remainder = BigInt(0);
    }
    return res;
  }

  if (opt.mode == ReductionMode::exact) {
    ExactBoolMarket market(events, opt.b, opt.limits);
    Rational d = 0;
    for (int t = 0; t < k; ++t) {
      const auto& c = clauses[static_cast<std::size_t>(t)];
      const Rational before = market.exact_disjunction_price(c.first, c.second);
      market.apply_disjunction(c.first, c.second, m);
      const Rational after = market.exact_disjunction_price(c.first, c.second);
      if (t == 0) {
        d = Rational(boolean_first_denominator(events, c.is_tautology()));
      } else {
        if (after == 0) throw DegenerateInstance("zero intermediate price");
        const Rational ratio = before / after;
        res.trace.price_ratios.push_back(to_double(ratio));
        d = Rational(m) * d * ratio;
      }
      if (boost::multiprecision::denominator(d) != 1) throw std::logic_error("telescoped D_t is not an integer");
      res.trace.rows.push_back({t + 1, securities::disjunction(c.first, c.second).label(), share_q, to_double(before),
                                to_double(after), boost::multiprecision::numerator(d).str()});
    }
    const BigInt dk = boost::multiprecision::numerator(d);
    if (market.exact_partition() != dk) throw std::logic_error("telescoped D_k disagrees with partition");
    BigInt rem;
    res.count = detail::extract_exact(dk, m, k, rem);
    res.exact_value = dk;
    res.remainder = rem;
    res.log_value = log_bigint(dk);
    return res;
  }

  BoolMarket market(events, opt.b, opt.limits);
  double log_d = 0.0;
  for (int t = 0; t < k; ++t) {
    const auto& c = clauses[static_cast<std::size_t>(t)];
    const double before = market.price_disjunction(c.first, c.second);
    market.buy_disjunction(c.first, c.second, share_q);
    const double after = market.price_disjunction(c.first, c.second);
    if (opt.mode == ReductionMode::prices) {
      if (t == 0) {
        log_d = log_bigint(boolean_first_denominator(events, c.is_tautology()));
      } else {
        if (!(after > 0.0) || !(before > 0.0)) throw DegenerateInstance("zero intermediate price");
        res.trace.price_ratios.push_back(before / after);
        log_d = log_m + log_d + std::log(before) - std::log(after);
      }
    } else {
      log_d = market.cost() / opt.b;
    }
    res.trace.rows.push_back({t + 1, securities::disjunction(c.first, c.second).label(), share_q, before, after,
                              detail::format_log_value(log_d)});
  }
  res.log_value = log_d;
  res.count = detail::extract_floating(log_d, log_m, k, std::exp(log_m), opt.floor_guard);
  return res;
}

}  // namespace lmsr

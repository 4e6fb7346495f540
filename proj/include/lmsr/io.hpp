#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "lmsr/bool_market.hpp"
#include "lmsr/errors.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/partial_order.hpp"
#include "lmsr/securities.hpp"
#include "lmsr/subset_market.hpp"

namespace lmsr {
namespace text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Drops a trailing '#' comment and surrounding whitespace.
inline std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

inline bool try_int(std::string_view s, long long& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return !s.empty() && ec == std::errc{} && p == end;
}

inline bool try_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return !s.empty() && ec == std::errc{} && p == end;
}

inline long long parse_int(std::string_view s, std::size_t line, const char* what) {
  long long v = 0;
  if (!try_int(s, v)) throw ParseError(line, std::string("expected integer ") + what + ", got '" + std::string(s) + "'");
  return v;
}

inline double parse_double(std::string_view s, std::size_t line, const char* what) {
  double v = 0;
  if (!try_double(s, v)) throw ParseError(line, std::string("expected number ") + what + ", got '" + std::string(s) + "'");
  return v;
}

/// Whitespace-separated tokens.
inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

/// One CSV record. Double quotes group fields containing commas; "" escapes a quote.
inline std::vector<std::string> split_csv(std::string_view s, std::size_t line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char ch = s[k];
    if (quoted) {
      if (ch == '"' && k + 1 < s.size() && s[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quote");
  out.emplace_back(trim(cur));
  return out;
}

/// Quotes a CSV field when it contains a comma or quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace text

/// <i|j>, <i|{a,b}>, <{a,b}|j>
struct SubsetSpec {
  SubsetSecurity security;
};
/// <i>j>
struct PairSpec {
  int above, below;
};
/// <a or c>, <a and c>
struct BoolSpec {
  Literal a, c;
  bool conjunction;
};
/// <k>, <{a,b}>, <all>; outcome indices 0-based, empty when all
struct GenericSpec {
  std::vector<std::uint64_t> outcomes;
  bool all = false;
};

using SecuritySpec = std::variant<SubsetSpec, PairSpec, BoolSpec, GenericSpec>;

namespace detail {

/// "k" or "{a,b,...}"; 1-based in text, 0-based out.
inline std::vector<long long> parse_index_set(std::string_view s, bool& is_set) {
  s = text::trim(s);
  std::vector<long long> out;
  is_set = !s.empty() && s.front() == '{';
  if (is_set) {
    if (s.back() != '}') throw InvalidInput("unterminated set '" + std::string(s) + "'");
    s = s.substr(1, s.size() - 2);
    std::size_t start = 0;
    while (start <= s.size()) {
      auto comma = s.find(',', start);
      if (comma == std::string_view::npos) comma = s.size();
      long long v = 0;
      if (!text::try_int(s.substr(start, comma - start), v))
        throw InvalidInput("bad set member in '{" + std::string(s) + "}'");
      out.push_back(v - 1);
      start = comma + 1;
    }
  } else {
    long long v = 0;
    if (!text::try_int(s, v)) throw InvalidInput("bad index '" + std::string(s) + "'");
    out.push_back(v - 1);
  }
  for (auto v : out)
    if (v < 0) throw InvalidInput("indices are 1-based and positive");
  return out;
}

inline Literal parse_literal(std::string_view s) {
  long long v = 0;
  if (!text::try_int(s, v) || v == 0) throw InvalidInput("bad literal '" + std::string(text::trim(s)) + "'");
  return Literal::from_signed(static_cast<int>(v));
}

inline std::vector<int> to_ints(const std::vector<long long>& xs) { return {xs.begin(), xs.end()}; }

}  // namespace detail

/// Parses one security spec. Throws InvalidInput on malformed text.
inline SecuritySpec parse_security(std::string_view raw) {
  const auto s = text::trim(raw);
  if (s.size() < 3 || s.front() != '<' || s.back() != '>')
    throw InvalidInput("security spec must look like <...>, got '" + std::string(s) + "'");
  const auto inner = text::trim(s.substr(1, s.size() - 2));
  for (std::string_view op : {std::string_view(" or "), std::string_view(" and ")}) {
    const auto at = inner.find(op);
    if (at == std::string_view::npos) continue;
    return BoolSpec{detail::parse_literal(inner.substr(0, at)), detail::parse_literal(inner.substr(at + op.size())),
                    op == " and "};
  }
  if (const auto bar = inner.find('|'); bar != std::string_view::npos) {
    bool left_set = false, right_set = false;
    const auto left = detail::parse_index_set(inner.substr(0, bar), left_set);
    const auto right = detail::parse_index_set(inner.substr(bar + 1), right_set);
    if (left_set && right_set) throw InvalidInput("subset spec cannot have sets on both sides");
    if (left_set) return SubsetSpec{SubsetSecurity::candidates(detail::to_ints(left), static_cast<int>(right[0]))};
    return SubsetSpec{SubsetSecurity::positions(static_cast<int>(left[0]), detail::to_ints(right))};
  }
  if (inner == "all") return GenericSpec{{}, true};
  if (const auto gt = inner.find('>'); gt != std::string_view::npos) {
    bool a_set = false, b_set = false;
    const auto a = detail::parse_index_set(inner.substr(0, gt), a_set);
    const auto b = detail::parse_index_set(inner.substr(gt + 1), b_set);
    if (a_set || b_set) throw InvalidInput("pair spec takes single candidates");
    return PairSpec{static_cast<int>(a[0]), static_cast<int>(b[0])};
  }
  bool is_set = false;
  const auto idx = detail::parse_index_set(inner, is_set);
  GenericSpec g;
  for (auto v : idx) g.outcomes.push_back(static_cast<std::uint64_t>(v));
  std::sort(g.outcomes.begin(), g.outcomes.end());
  g.outcomes.erase(std::unique(g.outcomes.begin(), g.outcomes.end()), g.outcomes.end());
  return g;
}

/// Square integer matrix: the size n, then n*n entries. '#' starts a comment.
inline Matrix<int> read_int_matrix(std::istream& in) {
  std::vector<std::pair<std::string, std::size_t>> tokens;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    for (auto& t : text::split_ws(text::strip_comment(line))) tokens.emplace_back(t, lineno);
  }
  if (tokens.empty()) throw ParseError(lineno ? lineno : 1, "empty matrix file");
  const auto n = text::parse_int(tokens[0].first, tokens[0].second, "matrix size");
  if (n < 1) throw ParseError(tokens[0].second, "matrix size must be positive");
  const auto need = static_cast<std::size_t>(n * n);
  if (tokens.size() - 1 != need)
    throw ParseError(tokens.back().second, "expected " + std::to_string(need) + " entries, found " +
                                               std::to_string(tokens.size() - 1));
  Matrix<int> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < need; ++k) {
    const auto& [tok, line] = tokens[k + 1];
    m.data()[k] = static_cast<int>(text::parse_int(tok, line, "matrix entry"));
  }
  return m;
}

/// Edge list "i j" meaning i before j, 1-based. An optional "n <count>"
/// line fixes the element count; otherwise it is the largest index seen.
inline PartialOrder read_partial_order(std::istream& in) {
  long long n = 0;
  std::vector<PartialOrder::Edge> edges;
  std::size_t lineno = 0;
  long long largest = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto toks = text::split_ws(text::strip_comment(line));
    if (toks.empty()) continue;
    if (toks[0] == "n") {
      if (toks.size() != 2) throw ParseError(lineno, "expected 'n <count>'");
      n = text::parse_int(toks[1], lineno, "element count");
      if (n < 1) throw ParseError(lineno, "element count must be positive");
      continue;
    }
    if (toks.size() != 2) throw ParseError(lineno, "expected an edge 'i j'");
    const auto i = text::parse_int(toks[0], lineno, "element");
    const auto j = text::parse_int(toks[1], lineno, "element");
    if (i < 1 || j < 1) throw ParseError(lineno, "elements are 1-based");
    largest = std::max({largest, i, j});
    edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
  }
  if (n == 0) n = largest;
  if (n == 0) throw ParseError(std::max<std::size_t>(lineno, 1), "no elements: give 'n <count>' or edges");
  if (largest > n) throw ParseError(lineno, "edge index exceeds n=" + std::to_string(n));
  return PartialOrder(static_cast<int>(n), std::move(edges));
}

/// DIMACS CNF restricted to two literals per clause.
inline CnfFormula read_dimacs_2cnf(std::istream& in) {
  std::size_t lineno = 0;
  long long events = -1, declared = -1;
  std::vector<std::pair<long long, std::size_t>> lits;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == 'c' || body.front() == '%') continue;
    const auto toks = text::split_ws(body);
    if (toks[0] == "p") {
      if (events >= 0) throw ParseError(lineno, "duplicate problem line");
      if (toks.size() != 4 || toks[1] != "cnf") throw ParseError(lineno, "expected 'p cnf <vars> <clauses>'");
      events = text::parse_int(toks[2], lineno, "variable count");
      declared = text::parse_int(toks[3], lineno, "clause count");
      if (events < 1 || declared < 0) throw ParseError(lineno, "bad problem line counts");
      continue;
    }
    if (events < 0) throw ParseError(lineno, "clause before the problem line");
    for (const auto& t : toks) lits.emplace_back(text::parse_int(t, lineno, "literal"), lineno);
  }
  if (events < 0) throw ParseError(std::max<std::size_t>(lineno, 1), "missing problem line");
  CnfFormula f(static_cast<int>(events));
  std::vector<long long> clause;
  for (const auto& [v, line] : lits) {
    if (v != 0) {
      if (v > events || -v > events) throw ParseError(line, "literal " + std::to_string(v) + " out of range");
      clause.push_back(v);
      continue;
    }
    if (clause.size() != 2) throw ParseError(line, "clause must have exactly two literals");
    try {
      f.add_clause(Literal::from_signed(static_cast<int>(clause[0])), Literal::from_signed(static_cast<int>(clause[1])));
    } catch (const InvalidInput& e) {
      throw ParseError(line, e.what());
    }
    clause.clear();
  }
  if (!clause.empty()) throw ParseError(lineno, "last clause is not terminated by 0");
  if (static_cast<long long>(f.clauses().size()) != declared)
    throw ParseError(lineno, "problem line declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(f.clauses().size()));
  return f;
}

namespace detail {

/// CSV rows with all-numeric fields; a non-numeric first row is a header.
inline std::vector<std::pair<std::vector<double>, std::size_t>> read_numeric_csv(std::istream& in, std::size_t width) {
  std::vector<std::pair<std::vector<double>, std::size_t>> rows;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto body = text::strip_comment(line);
    if (body.empty()) continue;
    const auto fields = text::split_csv(body, lineno);
    double probe = 0;
    if (rows.empty() && !fields.empty() && !text::try_double(fields[0], probe)) continue;
    if (fields.size() != width)
      throw ParseError(lineno, "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    std::vector<double> vals;
    for (const auto& f : fields) vals.push_back(text::parse_double(f, lineno, "field"));
    rows.emplace_back(std::move(vals), lineno);
  }
  return rows;
}

inline std::size_t index_field(double v, std::size_t line, const char* what) {
  if (v < 1 || v != static_cast<double>(static_cast<long long>(v)))
    throw ParseError(line, std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(v) - 1;
}

}  // namespace detail

/// Matrix losses "t,i,j,loss" (1-based). n = 0 infers the size from the
/// largest index. Missing entries are 0; T is the largest t.
inline std::vector<RealMatrix> read_matrix_losses(std::istream& in, std::size_t n = 0) {
  const auto rows = detail::read_numeric_csv(in, 4);
  std::size_t periods = 0, size = n;
  for (const auto& [v, line] : rows) {
    periods = std::max(periods, detail::index_field(v[0], line, "t") + 1);
    const auto extent = std::max(detail::index_field(v[1], line, "i"), detail::index_field(v[2], line, "j")) + 1;
    if (n != 0 && extent > n) throw ParseError(line, "index exceeds n=" + std::to_string(n));
    size = std::max(size, extent);
  }
  std::vector<RealMatrix> out(periods, RealMatrix(size, size, 0.0));
  for (const auto& [v, line] : rows)
    out[static_cast<std::size_t>(v[0]) - 1](static_cast<std::size_t>(v[1]) - 1, static_cast<std::size_t>(v[2]) - 1) = v[3];
  return out;
}

/// Vector losses "t,i,loss" (1-based), same conventions as matrix losses.
inline std::vector<std::vector<double>> read_vector_losses(std::istream& in, std::size_t n = 0) {
  const auto rows = detail::read_numeric_csv(in, 3);
  std::size_t periods = 0, size = n;
  for (const auto& [v, line] : rows) {
    periods = std::max(periods, detail::index_field(v[0], line, "t") + 1);
    const auto extent = detail::index_field(v[1], line, "i") + 1;
    if (n != 0 && extent > n) throw ParseError(line, "index exceeds n=" + std::to_string(n));
    size = std::max(size, extent);
  }
  std::vector<std::vector<double>> out(periods, std::vector<double>(size, 0.0));
  for (const auto& [v, line] : rows) out[static_cast<std::size_t>(v[0]) - 1][static_cast<std::size_t>(v[1]) - 1] = v[2];
  return out;
}

struct TradeLogEntry {
  std::size_t step;
  std::string security;
  double quantity;
  std::size_t line;
};

/// Trade log "step,security,quantity"; specs containing commas are quoted.
inline std::vector<TradeLogEntry> read_trade_log(std::istream& in) {
  std::vector<TradeLogEntry> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = text::split_csv(body, lineno);
    long long step = 0;
    if (out.empty() && !fields.empty() && !text::try_int(fields[0], step)) continue;
    if (fields.size() != 3) throw ParseError(lineno, "expected step,security,quantity");
    step = text::parse_int(fields[0], lineno, "step");
    if (step < 0) throw ParseError(lineno, "step must be nonnegative");
    const double q = text::parse_double(fields[2], lineno, "quantity");
    if (!std::isfinite(q)) throw ParseError(lineno, "quantity must be finite");
    try {
      (void)parse_security(fields[1]);
    } catch (const InvalidInput& e) {
      throw ParseError(lineno, e.what());
    }
    out.push_back({static_cast<std::size_t>(step), fields[1], q, lineno});
  }
  return out;
}

}  // namespace lmsr

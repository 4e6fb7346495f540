#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/outcome_space.hpp"

namespace lmsr {

/// Event outcome A_e or its negation. Events are 0-based internally.
struct Literal {
  int event = 0;
  bool negated = false;

  Literal operator!() const { return {event, !negated}; }
  bool satisfied_by(std::uint32_t events) const {
    return (((events >> event) & 1u) != 0) != negated;
  }
  /// 2*event + negated; total order used for canonical pair keys.
  int code() const { return 2 * event + (negated ? 1 : 0); }
  static Literal from_code(int c) { return {c / 2, (c % 2) != 0}; }
  /// DIMACS-style signed 1-based literal.
  int signed_index() const { return negated ? -(event + 1) : event + 1; }
  static Literal from_signed(int v) {
    if (v == 0) throw InvalidInput("literal index must be nonzero");
    return {std::abs(v) - 1, v < 0};
  }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal& a, const Literal& b) { return a.code() <=> b.code(); }
};

/// A bet paying $1 on every outcome in a designated set. The set is held as a
/// predicate so any enumerable space can host it.
class CompoundSecurity {
 public:
  using Predicate = std::function<bool(const Outcome&)>;

  CompoundSecurity(std::string label, Predicate pays) : label_(std::move(label)), pays_(std::move(pays)) {}

  bool pays_on(const Outcome& o) const { return pays_(o); }
  bool operator()(const Outcome& o) const { return pays_(o); }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  Predicate pays_;
};

namespace securities {

inline std::string set_label(const std::vector<int>& xs) {
  std::string s = "{";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(xs[k] + 1);
  }
  return s + "}";
}

/// Pays on every outcome.
inline CompoundSecurity sure() {
  return {"<all>", [](const Outcome&) { return true; }};
}

/// Elementary security for the outcome with the given enumeration index.
inline CompoundSecurity elementary(std::uint64_t index) {
  return {"<" + std::to_string(index + 1) + ">", [index](const Outcome& o) { return o.index == index; }};
}

inline CompoundSecurity outcome_set(std::vector<std::uint64_t> indices) {
  std::sort(indices.begin(), indices.end());
  std::string label = "<{";
  for (std::size_t k = 0; k < indices.size(); ++k) label += (k ? "," : "") + std::to_string(indices[k] + 1);
  label += "}>";
  return {label, [ix = std::move(indices)](const Outcome& o) {
            return std::binary_search(ix.begin(), ix.end(), o.index);
          }};
}

/// <i|j>: candidate i finishes in position j.
inline CompoundSecurity cell(int i, int j) {
  return {"<" + std::to_string(i + 1) + "|" + std::to_string(j + 1) + ">",
          [i, j](const Outcome& o) { return o.ranking[static_cast<std::size_t>(i)] == j; }};
}

/// <i|Phi>: candidate i finishes in one of the positions.
inline CompoundSecurity position_set(int i, std::vector<int> positions) {
  auto label = "<" + std::to_string(i + 1) + "|" + set_label(positions) + ">";
  return {label, [i, ps = std::move(positions)](const Outcome& o) {
            return std::find(ps.begin(), ps.end(), o.ranking[static_cast<std::size_t>(i)]) != ps.end();
          }};
}

/// <Psi|j>: one of the candidates finishes in position j.
inline CompoundSecurity candidate_set(std::vector<int> candidates, int j) {
  auto label = "<" + set_label(candidates) + "|" + std::to_string(j + 1) + ">";
  return {label, [j, cs = std::move(candidates)](const Outcome& o) {
            return std::any_of(cs.begin(), cs.end(),
                               [&](int c) { return o.ranking[static_cast<std::size_t>(c)] == j; });
          }};
}

/// <i>j>: candidate i ranks above (finishes before) candidate j.
inline CompoundSecurity ranks_above(int i, int j) {
  return {"<" + std::to_string(i + 1) + ">" + std::to_string(j + 1) + ">",
          [i, j](const Outcome& o) {
            return o.ranking[static_cast<std::size_t>(i)] < o.ranking[static_cast<std::size_t>(j)];
          }};
}

inline CompoundSecurity disjunction(Literal a, Literal c) {
  return {"<" + std::to_string(a.signed_index()) + " or " + std::to_string(c.signed_index()) + ">",
          [a, c](const Outcome& o) { return a.satisfied_by(o.events) || c.satisfied_by(o.events); }};
}

inline CompoundSecurity conjunction(Literal a, Literal c) {
  return {"<" + std::to_string(a.signed_index()) + " and " + std::to_string(c.signed_index()) + ">",
          [a, c](const Outcome& o) { return a.satisfied_by(o.events) && c.satisfied_by(o.events); }};
}

}  // namespace securities
}  // namespace lmsr

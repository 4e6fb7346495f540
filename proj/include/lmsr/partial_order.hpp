#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/outcome_space.hpp"

namespace lmsr {

/// Strict partial order on {0..n-1} given by "i before j" edges. The
/// relation is the transitive closure of the edges; construction rejects
/// cycles (including self-loops).
class PartialOrder {
 public:
  using Edge = std::pair<int, int>;

  explicit PartialOrder(int n, std::vector<Edge> edges = {}) : n_(n), edges_(std::move(edges)) {
    if (n < 1) throw InvalidInput("partial order needs at least one element");
    for (auto [i, j] : edges_) {
      if (i < 0 || j < 0 || i >= n || j >= n)
        throw InvalidInput("edge " + std::to_string(i + 1) + " " + std::to_string(j + 1) + " out of range");
      if (i == j) throw InvalidInput("self-loop on element " + std::to_string(i + 1));
    }
    close();
  }

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// i strictly before j in the closure.
  bool before(int i, int j) const { return reach_[idx(i, j)]; }

  /// Edges of the transitive reduction (pairs with no element strictly
  /// between them), deduplicated and in first-appearance input order.
  std::vector<Edge> covering_pairs() const {
    std::vector<Edge> out;
    for (auto [i, j] : edges_) {
      bool implied = false;
      for (int l = 0; l < n_ && !implied; ++l)
        if (l != i && l != j && before(i, l) && before(l, j)) implied = true;
      if (implied) continue;
      if (std::find(out.begin(), out.end(), Edge{i, j}) == out.end()) out.emplace_back(i, j);
    }
    return out;
  }

  /// Ranking (candidate -> position) is consistent with the order.
  bool extended_by(std::span<const int> ranking) const {
    for (auto [i, j] : edges_)
      if (ranking[static_cast<std::size_t>(i)] >= ranking[static_cast<std::size_t>(j)]) return false;
    return true;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j); }

  void close() {
    reach_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), false);
    for (auto [i, j] : edges_) reach_[idx(i, j)] = true;
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        if (reach_[idx(i, k)])
          for (int j = 0; j < n_; ++j)
            if (reach_[idx(k, j)]) reach_[idx(i, j)] = true;
    for (int i = 0; i < n_; ++i)
      if (reach_[idx(i, i)]) throw InvalidInput("partial order contains a cycle through element " + std::to_string(i + 1));
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<bool> reach_;
};

/// Number of total orders consistent with P, by filtered enumeration.
inline std::uint64_t count_linear_extensions_oracle(const PartialOrder& p, const EnumerationLimits& limits = {}) {
  OutcomeSpace::permutations(p.size()).check_capacity(limits);
  std::uint64_t count = 0;
  for_each_permutation(p.size(), [&](const Outcome& o) {
    if (p.extended_by(o.ranking)) ++count;
  });
  return count;
}

}  // namespace lmsr

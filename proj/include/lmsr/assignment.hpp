#pragma once

#include <limits>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/outcome_space.hpp"

namespace lmsr {

struct Assignment {
  double value = 0.0;
  std::vector<int> ranking;  // row i -> column ranking[i]
};

/// Exhaustive search for the permutation maximizing (or minimizing)
/// sum_i m(i, sigma(i)). Exact; meant for n <= 8.
inline Assignment best_assignment(const RealMatrix& m, bool maximize, int max_n = 9) {
  if (!m.is_square()) throw InvalidInput("assignment needs a square matrix");
  const int n = static_cast<int>(m.rows());
  if (n > max_n) throw CapacityError("assignment search by enumeration limited to n <= " + std::to_string(max_n));
  Assignment best;
  best.value = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  if (n == 0) {
    best.value = 0.0;
    return best;
  }
  for_each_permutation(n, [&](const Outcome& o) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += m(static_cast<std::size_t>(i), static_cast<std::size_t>(o.ranking[static_cast<std::size_t>(i)]));
    if (maximize ? s > best.value : s < best.value) {
      best.value = s;
      best.ranking.assign(o.ranking.begin(), o.ranking.end());
    }
  });
  return best;
}

}  // namespace lmsr

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/numeric.hpp"
#include "lmsr/outcome_space.hpp"

namespace lmsr {

enum class PermanentMethod { enumeration, ryser, exact_bigint };

namespace detail {
template <class T>
void require_square(const Matrix<T>& a) {
  if (!a.is_square()) throw InvalidInput("permanent of a non-square matrix");
}
}  // namespace detail

/// per(A) = sum over permutations sigma of prod_i a_{i,sigma(i)}, by brute force.
template <class T>
T permanent_enumerate(const Matrix<T>& a) {
  detail::require_square(a);
  const int n = static_cast<int>(a.rows());
  if (n == 0) return T(1);
  T total = T(0);
  for_each_permutation(n, [&](const Outcome& o) {
    T term = T(1);
    for (int i = 0; i < n; ++i) term *= a(static_cast<std::size_t>(i), static_cast<std::size_t>(o.ranking[static_cast<std::size_t>(i)]));
    total += term;
  });
  return total;
}

/// Ryser's inclusion-exclusion formula with Gray-code subset order, O(2^n n):
///   per(A) = (-1)^n sum_{S subset [n]} (-1)^{|S|} prod_i sum_{j in S} a_ij
template <class T>
T permanent_ryser(const Matrix<T>& a) {
  detail::require_square(a);
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  if (n >= 63) throw CapacityError("Ryser permanent limited to n < 63");
  std::vector<T> rowsum(n, T(0));
  std::vector<bool> in(n, false);
  T total = T(0);
  const std::uint64_t subsets = std::uint64_t{1} << n;
  int size = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const auto col = static_cast<std::size_t>(std::countr_zero(k));
    if (in[col]) {
      for (std::size_t i = 0; i < n; ++i) rowsum[i] -= a(i, col);
      --size;
    } else {
      for (std::size_t i = 0; i < n; ++i) rowsum[i] += a(i, col);
      ++size;
    }
    in[col] = !in[col];
    T prod = T(1);
    for (std::size_t i = 0; i < n; ++i) prod *= rowsum[i];
    if (((static_cast<std::size_t>(size) + n) & 1u) == 0) total += prod;
    else total -= prod;
  }
  return total;
}

/// per(A) together with the gradient d per / d a_ij = per(A with row i and
/// column j deleted), all from one Ryser sweep in O(2^n n^2).
template <class T>
struct PermanentWithMinors {
  T permanent;
  Matrix<T> minors;  // minors(i,j) = per(M_ij)
};

template <class T>
PermanentWithMinors<T> permanent_and_minors_ryser(const Matrix<T>& a) {
  detail::require_square(a);
  const std::size_t n = a.rows();
  PermanentWithMinors<T> out{T(0), Matrix<T>(n, n, T(0))};
  if (n == 0) {
    out.permanent = T(1);
    return out;
  }
  if (n == 1) {
    out.permanent = a(0, 0);
    out.minors(0, 0) = T(1);
    return out;
  }
  if (n >= 63) throw CapacityError("Ryser permanent limited to n < 63");
  std::vector<T> rowsum(n, T(0)), prefix(n + 1), suffix(n + 1), without(n);
  std::vector<bool> in(n, false);
  int size = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const auto col = static_cast<std::size_t>(std::countr_zero(k));
    if (in[col]) {
      for (std::size_t i = 0; i < n; ++i) rowsum[i] -= a(i, col);
      --size;
    } else {
      for (std::size_t i = 0; i < n; ++i) rowsum[i] += a(i, col);
      ++size;
    }
    in[col] = !in[col];
    prefix[0] = T(1);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * rowsum[i];
    suffix[n] = T(1);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * rowsum[i];
    const bool plus = ((static_cast<std::size_t>(size) + n) & 1u) == 0;
    if (plus) out.permanent += prefix[n];
    else out.permanent -= prefix[n];
    // d/d a_ij of prod_k rowsum_k is prod_{k != i} rowsum_k when j in S.
    for (std::size_t i = 0; i < n; ++i) without[i] = prefix[i] * suffix[i + 1];
    for (std::size_t j = 0; j < n; ++j) {
      if (!in[j]) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (plus) out.minors(i, j) += without[i];
        else out.minors(i, j) -= without[i];
      }
    }
  }
  return out;
}

inline bool is_integral(const RealMatrix& a) {
  for (double v : a.data())
    if (!std::isfinite(v) || std::floor(v) != v) return false;
  return true;
}

inline Matrix<BigInt> to_bigint(const RealMatrix& a) {
  if (!is_integral(a)) throw InvalidInput("exact permanent requires integer entries");
  return a.map([](double v) { return BigInt(static_cast<long long>(v)); });
}

inline BigInt permanent_exact(const Matrix<BigInt>& a) { return permanent_ryser(a); }

/// Mode dispatch for floating input. exact_bigint converts to big integers and
/// rounds the exact result to the nearest double.
inline double permanent(const RealMatrix& a, PermanentMethod method,
                        const EnumerationLimits& limits = {}) {
  detail::require_square(a);
  const int n = static_cast<int>(a.rows());
  switch (method) {
    case PermanentMethod::enumeration:
      if (n > limits.max_candidates) throw CapacityError("matrix too large for permanent by enumeration");
      return permanent_enumerate(a);
    case PermanentMethod::ryser: {
      if (n > limits.max_ryser_candidates) throw CapacityError("matrix too large for Ryser permanent");
      const auto wide = a.map([](double v) { return static_cast<long double>(v); });
      return static_cast<double>(permanent_ryser(wide));
    }
    case PermanentMethod::exact_bigint:
      if (n > limits.max_ryser_candidates) throw CapacityError("matrix too large for exact permanent");
      return permanent_exact(to_bigint(a)).convert_to<double>();
  }
  return 0.0;
}

}  // namespace lmsr

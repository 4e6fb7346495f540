#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lmsr/errors.hpp"

namespace lmsr {

/// Enumeration caps. Pricing by direct enumeration refuses spaces beyond these.
struct EnumerationLimits {
  int max_candidates = 10;       // permutations: 10! ~ 3.6M outcomes
  int max_events = 20;           // booleans: 2^20 ~ 1M outcomes
  std::uint64_t max_flat = 1u << 24;
  int max_ryser_candidates = 20;  // permanent fast path
};

/// One outcome as seen during enumeration. Only the fields for the space's
/// kind are meaningful.
struct Outcome {
  std::uint64_t index = 0;         // position in enumeration order
  std::span<const int> ranking;    // permutation: ranking[i] = position of candidate i (0-based)
  std::uint32_t events = 0;        // boolean: bit e set iff event e occurs
};

class OutcomeSpace {
 public:
  enum class Kind { permutation, boolean, flat };

  static OutcomeSpace permutations(int n) {
    if (n < 1) throw InvalidInput("permutation space needs n >= 1");
    return OutcomeSpace(Kind::permutation, n);
  }
  static OutcomeSpace booleans(int events) {
    if (events < 1 || events > 31) throw InvalidInput("boolean space needs 1 <= N <= 31");
    return OutcomeSpace(Kind::boolean, events);
  }
  /// Plain space of n labelled outcomes (one elementary security each).
  static OutcomeSpace flat(int n) {
    if (n < 1) throw InvalidInput("flat space needs n >= 1");
    return OutcomeSpace(Kind::flat, n);
  }

  Kind kind() const { return kind_; }
  /// n for permutations and flat spaces, N for boolean spaces.
  int dimension() const { return dim_; }

  /// |Omega|, saturating at UINT64_MAX.
  std::uint64_t size() const {
    switch (kind_) {
      case Kind::permutation: {
        std::uint64_t f = 1;
        for (int k = 2; k <= dim_; ++k) {
          if (f > UINT64_MAX / static_cast<std::uint64_t>(k)) return UINT64_MAX;
          f *= static_cast<std::uint64_t>(k);
        }
        return f;
      }
      case Kind::boolean:
        return std::uint64_t{1} << dim_;
      case Kind::flat:
        return static_cast<std::uint64_t>(dim_);
    }
    return 0;
  }

  /// log|Omega|, valid for spaces beyond 64-bit range as well.
  double log_size() const {
    switch (kind_) {
      case Kind::permutation: return std::lgamma(static_cast<double>(dim_) + 1.0);
      case Kind::boolean: return dim_ * std::log(2.0);
      case Kind::flat: return std::log(static_cast<double>(dim_));
    }
    return 0.0;
  }

  void check_capacity(const EnumerationLimits& limits) const {
    bool ok = true;
    switch (kind_) {
      case Kind::permutation: ok = dim_ <= limits.max_candidates; break;
      case Kind::boolean: ok = dim_ <= limits.max_events; break;
      case Kind::flat: ok = static_cast<std::uint64_t>(dim_) <= limits.max_flat; break;
    }
    if (!ok) throw CapacityError(describe() + " exceeds the enumeration cap");
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::permutation: return "permutations of " + std::to_string(dim_) + " candidates";
      case Kind::boolean: return "joint outcomes of " + std::to_string(dim_) + " events";
      case Kind::flat: return std::to_string(dim_) + " outcomes";
    }
    return {};
  }

  friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;

 private:
  OutcomeSpace(Kind k, int d) : kind_(k), dim_(d) {}

  Kind kind_;
  int dim_;
};

/// Visit every permutation of {0..n-1} in lexicographic order.
/// f receives an Outcome whose ranking maps candidate -> position.
template <class F>
void for_each_permutation(int n, F&& f) {
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  Outcome o;
  o.ranking = sigma;
  do {
    f(static_cast<const Outcome&>(o));
    ++o.index;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
}

template <class F>
void for_each_assignment(int events, F&& f) {
  const std::uint64_t total = std::uint64_t{1} << events;
  Outcome o;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    o.index = bits;
    o.events = static_cast<std::uint32_t>(bits);
    f(static_cast<const Outcome&>(o));
  }
}

/// Enumerate each outcome of the space exactly once.
template <class F>
void for_each_outcome(const OutcomeSpace& space, F&& f) {
  switch (space.kind()) {
    case OutcomeSpace::Kind::permutation:
      for_each_permutation(space.dimension(), f);
      break;
    case OutcomeSpace::Kind::boolean:
      for_each_assignment(space.dimension(), f);
      break;
    case OutcomeSpace::Kind::flat: {
      Outcome o;
      for (int k = 0; k < space.dimension(); ++k) {
        o.index = static_cast<std::uint64_t>(k);
        f(static_cast<const Outcome&>(o));
      }
      break;
    }
  }
}

}  // namespace lmsr

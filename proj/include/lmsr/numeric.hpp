#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

namespace lmsr {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Absolute tolerance used for price equalities throughout the library.
inline constexpr double kPriceTolerance = 1e-9;

/// Streaming log(sum(exp(x))) with running max subtraction.
/// Starts at log(0) = -inf; adding -inf terms is a no-op.
class LogSumExp {
 public:
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  void merge(const LogSumExp& other) {
    if (other.empty()) return;
    if (empty()) {
      *this = other;
      return;
    }
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
  }

  bool empty() const { return sum_ == 0.0; }

  double value() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> xs) {
  LogSumExp acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double log_factorial(unsigned n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline BigInt pow2(unsigned e) { return BigInt(1) << e; }

/// Natural log of a positive big integer without overflowing a double.
inline double log_bigint(const BigInt& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = boost::multiprecision::msb(v);
  if (bits < 1000) return std::log(v.convert_to<double>());
  const unsigned shift = static_cast<unsigned>(bits) - 900;
  BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

inline double log_rational(const Rational& r) {
  return log_bigint(boost::multiprecision::numerator(r)) -
         log_bigint(boost::multiprecision::denominator(r));
}

inline double to_double(const Rational& r) {
  return std::exp(log_rational(r));
}

}  // namespace lmsr

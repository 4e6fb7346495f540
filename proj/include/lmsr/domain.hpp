#pragma once

#include <cmath>

#include "lmsr/errors.hpp"
#include "lmsr/numeric.hpp"

namespace lmsr {

// Weight domains for the family markets. A market stores one held quantity
// per security and folds the securities paying on an outcome into that
// outcome's weight.
//
// LogDomain: quantities are share counts q, weights are log e^{q/b} = q/b,
// folded by addition.
// ExactDomain: quantities are integer multipliers m = e^{q/b} (buying
// b*ln(m) shares multiplies by m), weights are exact products.

struct LogDomain {
  using quantity_type = double;
  using weight_type = double;

  static quantity_type neutral_quantity() { return 0.0; }
  static bool is_neutral(quantity_type q) { return q == 0.0; }
  static void accumulate(quantity_type& held, quantity_type delta) { held += delta; }

  static weight_type unit() { return 0.0; }
  static weight_type factor(quantity_type q, double b) { return q / b; }
  static void fold(weight_type& acc, const weight_type& f) { acc += f; }

  static void validate(quantity_type q) {
    if (!std::isfinite(q)) throw InvalidInput("share quantity must be finite");
  }
};

struct ExactDomain {
  using quantity_type = BigInt;
  using weight_type = BigInt;

  static quantity_type neutral_quantity() { return 1; }
  static bool is_neutral(const quantity_type& m) { return m == 1; }
  static void accumulate(quantity_type& held, const quantity_type& multiplier) { held *= multiplier; }

  static weight_type unit() { return 1; }
  static weight_type factor(const quantity_type& m, double /*b*/) { return m; }
  static void fold(weight_type& acc, const weight_type& f) { acc *= f; }

  static void validate(const quantity_type& m) {
    if (m <= 0) throw InvalidInput("exact multiplier must be a positive integer");
  }
};

}  // namespace lmsr

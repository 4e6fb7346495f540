#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/matrix.hpp"

namespace lmsr {

struct SinkhornOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

struct SinkhornResult {
  RealMatrix matrix;
  /// log of the diagonal scalings: matrix = diag(e^r) * input * diag(e^c)
  std::vector<double> log_row_scale;
  std::vector<double> log_col_scale;
  std::size_t iterations = 0;
  double deviation = 0.0;
};

/// Sinkhorn balancing: alternately normalize rows then columns until every
/// row and column sum is within 1 +- tolerance. The check runs before each
/// sweep, so an already balanced input returns unchanged after zero sweeps.
inline SinkhornResult sinkhorn_balance(const RealMatrix& input, const SinkhornOptions& opt = {}) {
  if (!input.is_square() || input.rows() == 0) throw InvalidInput("Sinkhorn needs a non-empty square matrix");
  if (!(opt.tolerance > 0.0)) throw InvalidInput("Sinkhorn tolerance must be positive");
  for (double v : input.data())
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("Sinkhorn needs strictly positive finite entries");

  const std::size_t n = input.rows();
  SinkhornResult res{input, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0, 0.0};
  RealMatrix& m = res.matrix;
  while (true) {
    res.deviation = doubly_stochastic_deviation(m);
    if (res.deviation <= opt.tolerance) return res;
    if (res.iterations >= opt.max_iterations)
      throw ConvergenceError("Sinkhorn did not converge within " + std::to_string(opt.max_iterations) + " iterations",
                             n, m.data(), res.deviation);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j);
      for (std::size_t j = 0; j < n; ++j) m(i, j) /= s;
      res.log_row_scale[i] -= std::log(s);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += m(i, j);
      for (std::size_t i = 0; i < n; ++i) m(i, j) /= s;
      res.log_col_scale[j] -= std::log(s);
    }
    ++res.iterations;
  }
}

}  // namespace lmsr

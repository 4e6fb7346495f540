#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "lmsr/errors.hpp"

namespace lmsr {

/// Dense row-major matrix. Small by construction (n <= ~20 everywhere it is used).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InvalidInput("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix square(std::size_t n, T fill = T{}) { return Matrix(n, n, fill); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  /// Copy with row r and column c removed.
  Matrix minor(std::size_t r, std::size_t c) const {
    Matrix out(rows_ - 1, cols_ - 1);
    for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
      if (i == r) continue;
      for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
        if (j == c) continue;
        out(oi, oj++) = (*this)(i, j);
      }
      ++oi;
    }
    return out;
  }

  /// Trailing principal block: rows and columns [first, n).
  Matrix trailing(std::size_t first) const {
    Matrix out(rows_ - first, cols_ - first);
    for (std::size_t i = first; i < rows_; ++i)
      for (std::size_t j = first; j < cols_; ++j) out(i - first, j - first) = (*this)(i, j);
    return out;
  }

  template <class F>
  auto map(F&& f) const {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> out(rows_, cols_);
    std::transform(data_.begin(), data_.end(), out.data().begin(), f);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;

inline std::vector<double> row_sums(const RealMatrix& m) {
  std::vector<double> s(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s[i] += m(i, j);
  return s;
}

inline std::vector<double> col_sums(const RealMatrix& m) {
  std::vector<double> s(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s[j] += m(i, j);
  return s;
}

/// max |row or column sum - 1|
inline double doubly_stochastic_deviation(const RealMatrix& m) {
  double dev = 0.0;
  for (double s : row_sums(m)) dev = std::max(dev, std::abs(s - 1.0));
  for (double s : col_sums(m)) dev = std::max(dev, std::abs(s - 1.0));
  return dev;
}

inline double max_abs_difference(const RealMatrix& a, const RealMatrix& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

/// Frobenius inner product sum_ij a_ij b_ij.
inline double dot(const RealMatrix& a, const RealMatrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
  return s;
}

}  // namespace lmsr

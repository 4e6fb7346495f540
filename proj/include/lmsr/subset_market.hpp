#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lmsr/domain.hpp"
#include "lmsr/market.hpp"
#include "lmsr/matrix.hpp"
#include "lmsr/permanent.hpp"
#include "lmsr/securities.hpp"

namespace lmsr {

/// Subset-betting security over candidates x positions, expanded to the cells
/// <i|j> it is equivalent to. Indices are 0-based.
class SubsetSecurity {
 public:
  static SubsetSecurity cell(int i, int j) { return SubsetSecurity({{i, j}}, securities::cell(i, j).label()); }

  /// <i|Phi>
  static SubsetSecurity positions(int i, std::vector<int> phi) {
    normalize(phi);
    std::vector<std::pair<int, int>> cells;
    for (int j : phi) cells.emplace_back(i, j);
    return SubsetSecurity(std::move(cells),
                          "<" + std::to_string(i + 1) + "|" + securities::set_label(phi) + ">");
  }

  /// <Psi|j>
  static SubsetSecurity candidates(std::vector<int> psi, int j) {
    normalize(psi);
    std::vector<std::pair<int, int>> cells;
    for (int i : psi) cells.emplace_back(i, j);
    return SubsetSecurity(std::move(cells),
                          "<" + securities::set_label(psi) + "|" + std::to_string(j + 1) + ">");
  }

  const std::vector<std::pair<int, int>>& cells() const { return cells_; }
  const std::string& label() const { return label_; }

  void validate(int n) const {
    if (cells_.empty()) throw InvalidInput("subset security " + label_ + " covers no cell");
    for (auto [i, j] : cells_)
      if (i < 0 || j < 0 || i >= n || j >= n)
        throw InvalidInput("subset security " + label_ + " out of range for n=" + std::to_string(n));
  }

  /// Same payoff set as a predicate over permutations.
  CompoundSecurity compound() const {
    return {label_, [cs = cells_](const Outcome& o) {
              return std::any_of(cs.begin(), cs.end(), [&](const auto& c) {
                return o.ranking[static_cast<std::size_t>(c.first)] == c.second;
              });
            }};
  }

 private:
  SubsetSecurity(std::vector<std::pair<int, int>> cells, std::string label)
      : cells_(std::move(cells)), label_(std::move(label)) {}

  static void normalize(std::vector<int>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }

  std::vector<std::pair<int, int>> cells_;
  std::string label_;
};

enum class SubsetMethod { enumeration, ryser };

/// LMSR over permutations of n candidates trading cell securities <i|j>.
/// q(i,j) is the outstanding quantity of <i|j>; an outcome sigma weighs
/// prod_k e^{q(k, sigma(k))/b}.
template <class Domain>
class BasicSubsetMarket {
 public:
  using domain_type = Domain;
  using quantity_type = typename Domain::quantity_type;

  BasicSubsetMarket(int n, double b, EnumerationLimits limits = {})
      : n_(n), b_(b), limits_(limits),
        q_(static_cast<std::size_t>(n), static_cast<std::size_t>(n), Domain::neutral_quantity()) {
    if (n < 1) throw InvalidInput("subset market needs n >= 1");
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("liquidity b must be positive");
  }

  int candidates() const { return n_; }
  double liquidity() const { return b_; }
  OutcomeSpace space() const { return OutcomeSpace::permutations(n_); }
  const EnumerationLimits& limits() const { return limits_; }
  const Matrix<quantity_type>& quantities() const { return q_; }
  const quantity_type& quantity(int i, int j) const { return q_(idx(i), idx(j)); }

  /// Overwrite the whole share matrix (used to seed states and reductions).
  void set_quantities(Matrix<quantity_type> q) {
    if (q.rows() != q_.rows() || q.cols() != q_.cols()) throw InvalidInput("share matrix dimension mismatch");
    for (const auto& v : q.data()) Domain::validate(v);
    q_ = std::move(q);
  }

  /// Log domain: (i,j) -> q_ij / b. Exact domain: (i,j) -> integer weight.
  Matrix<typename Domain::weight_type> weight_matrix() const {
    Matrix<typename Domain::weight_type> w(q_.rows(), q_.cols());
    for (std::size_t k = 0; k < q_.data().size(); ++k) w.data()[k] = Domain::factor(q_.data()[k], b_);
    return w;
  }

  template <class F>
  void visit_outcomes(F&& f) const {
    space().check_capacity(limits_);
    const auto w = weight_matrix();
    for_each_permutation(n_, [&](const Outcome& o) {
      auto acc = Domain::unit();
      for (int k = 0; k < n_; ++k)
        Domain::fold(acc, w(static_cast<std::size_t>(k), static_cast<std::size_t>(o.ranking[static_cast<std::size_t>(k)])));
      f(o, acc);
    });
  }

  /// Record a trade without pricing it.
  void apply(int i, int j, const quantity_type& delta) {
    Domain::validate(delta);
    Domain::accumulate(q_(idx(i), idx(j)), delta);
  }

  void apply(const SubsetSecurity& s, const quantity_type& delta) {
    s.validate(n_);
    Domain::validate(delta);
    for (auto [i, j] : s.cells()) Domain::accumulate(q_(idx(i), idx(j)), delta);
  }

  // ---- log-domain pricing -------------------------------------------------

  /// Full n x n matrix of instantaneous prices p_ij.
  RealMatrix price_matrix(SubsetMethod method = SubsetMethod::ryser) const
    requires std::same_as<Domain, LogDomain>
  {
    const std::size_t n = q_.rows();
    RealMatrix p(n, n, 0.0);
    if (method == SubsetMethod::enumeration) {
      std::vector<LogSumExp> cell(n * n);
      LogSumExp all;
      visit_outcomes([&](const Outcome& o, double lw) {
        all.add(lw);
        for (std::size_t k = 0; k < n; ++k) cell[k * n + static_cast<std::size_t>(o.ranking[k])].add(lw);
      });
      const double z = all.value();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          p(i, j) = cell[i * n + j].empty() ? 0.0 : std::exp(cell[i * n + j].value() - z);
      return p;
    }
    check_ryser();
    const auto scaled = scaled_weights();
    const auto pm = permanent_and_minors_ryser(scaled.weights);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p(i, j) = static_cast<double>(scaled.weights(i, j) * pm.minors(i, j) / pm.permanent);
    return p;
  }

  double cell_price(int i, int j, SubsetMethod method = SubsetMethod::ryser) const
    requires std::same_as<Domain, LogDomain>
  {
    (void)idx(i);
    (void)idx(j);
    if (method == SubsetMethod::enumeration) return lmsr::price(*this, securities::cell(i, j));
    return price_matrix(method)(idx(i), idx(j));
  }

  /// Price of a subset security: sum over its (mutually exclusive) cells.
  double price(const SubsetSecurity& s, SubsetMethod method = SubsetMethod::ryser) const
    requires std::same_as<Domain, LogDomain>
  {
    s.validate(n_);
    const auto p = price_matrix(method);
    double total = 0.0;
    for (auto [i, j] : s.cells()) total += p(idx(i), idx(j));
    return std::min(total, 1.0);
  }

  /// b log per(B), B = (e^{q_ij/b}).
  double cost(SubsetMethod method = SubsetMethod::ryser) const
    requires std::same_as<Domain, LogDomain>
  {
    if (method == SubsetMethod::enumeration) return lmsr::cost(*this);
    check_ryser();
    const auto scaled = scaled_weights();
    const long double per = permanent_ryser(scaled.weights);
    return b_ * (scaled.log_scale + static_cast<double>(std::log(per)));
  }

  /// Buy q shares of s; returns C(after) - C(before).
  double buy(const SubsetSecurity& s, double q, SubsetMethod method = SubsetMethod::ryser)
    requires std::same_as<Domain, LogDomain>
  {
    s.validate(n_);
    LogDomain::validate(q);
    if (q == 0.0) return 0.0;
    const double before = cost(method);
    apply(s, q);
    return cost(method) - before;
  }

  // ---- exact pricing --------------------------------------------------------

  Rational exact_cell_price(int i, int j) const
    requires std::same_as<Domain, ExactDomain>
  {
    (void)idx(i);
    (void)idx(j);
    return exact_price(*this, securities::cell(i, j));
  }

  /// per(B) over the integer weight matrix.
  BigInt exact_partition() const
    requires std::same_as<Domain, ExactDomain>
  {
    return total_weight(*this);
  }

 private:
  struct Scaled {
    Matrix<long double> weights;  // e^{q_ij/b - r_i} in (0, 1]
    double log_scale;             // sum_i r_i
  };

  Scaled scaled_weights() const {
    const std::size_t n = q_.rows();
    Scaled s{Matrix<long double>(n, n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      double r = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) r = std::max(r, q_(i, j) / b_);
      for (std::size_t j = 0; j < n; ++j) s.weights(i, j) = std::exp(static_cast<long double>(q_(i, j) / b_ - r));
      s.log_scale += r;
    }
    return s;
  }

  void check_ryser() const {
    if (n_ > limits_.max_ryser_candidates)
      throw CapacityError("subset market with n=" + std::to_string(n_) + " exceeds the Ryser cap");
  }

  std::size_t idx(int k) const {
    if (k < 0 || k >= n_) throw InvalidInput("index " + std::to_string(k + 1) + " out of range");
    return static_cast<std::size_t>(k);
  }

  int n_;
  double b_;
  EnumerationLimits limits_;
  Matrix<quantity_type> q_;
};

using SubsetMarket = BasicSubsetMarket<LogDomain>;
using ExactSubsetMarket = BasicSubsetMarket<ExactDomain>;

}  // namespace lmsr

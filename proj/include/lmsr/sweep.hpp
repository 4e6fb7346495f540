#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lmsr/errors.hpp"
#include "lmsr/permelearn.hpp"
#include "lmsr/scenario.hpp"
#include "lmsr/subset_approx.hpp"
#include "lmsr/weighted_majority.hpp"

namespace lmsr {

enum class SweepKind { wm, permelearn, approx };

inline SweepKind parse_sweep_kind(const std::string& s) {
  if (s == "wm") return SweepKind::wm;
  if (s == "permelearn") return SweepKind::permelearn;
  if (s == "approx") return SweepKind::approx;
  throw InvalidInput("unknown sweep '" + s + "'");
}

inline const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::wm: return "wm";
    case SweepKind::permelearn: return "permelearn";
    case SweepKind::approx: return "approx";
  }
  return "?";
}

/// Grid = sizes x etas (wm, permelearn) or sizes x eps (approx), times seeds.
struct SweepConfig {
  SweepKind kind = SweepKind::wm;
  std::vector<int> sizes;
  std::vector<double> etas;
  std::vector<double> eps;
  std::vector<std::uint64_t> seeds;
  std::size_t periods = 100;  // T for wm and permelearn
  double b = 1.0;
  std::size_t trades = 20;    // lump trades per approx run, before chunking
  double max_trade = 1.0;     // lump quantities drawn from [-max_trade, max_trade]
  bool buys_only = false;     // approx: draw lump quantities from [0, max_trade]
};

struct SweepRow {
  std::string kind;
  int n = 0;
  double eta = 0.0, eps = 0.0, b = 1.0;
  std::size_t periods = 0;
  std::uint64_t seed = 0;
  double measured = 0.0, bound = 0.0, limit_bound = 0.0;
  double margin() const { return bound - measured; }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (r.margin() < -1e-9) return false;
    return true;
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "kind,n,eta,eps,b,T,seed,measured,bound,margin,limit_bound\n";
    for (const auto& r : rows)
      out << r.kind << "," << r.n << "," << fixed9(r.eta) << "," << fixed9(r.eps) << "," << fixed9(r.b) << ","
          << r.periods << "," << r.seed << "," << fixed9(r.measured) << "," << fixed9(r.bound) << ","
          << fixed9(r.margin()) << "," << fixed9(r.limit_bound) << "\n";
    return out.str();
  }
};

/// Random subset security. The shape (single cell, position set, candidate
/// set) is chosen uniformly.
inline SubsetSecurity random_subset_security(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1), kind(0, 2);
  std::bernoulli_distribution coin(0.5);
  const int k = kind(rng);
  if (k == 0) return SubsetSecurity::cell(pick(rng), pick(rng));
  std::vector<int> set;
  for (int v = 0; v < n; ++v)
    if (coin(rng)) set.push_back(v);
  if (set.empty()) set.push_back(pick(rng));
  return k == 1 ? SubsetSecurity::positions(pick(rng), set) : SubsetSecurity::candidates(set, pick(rng));
}

/// One grid point: size n, parameter p (eta or eps), one seed.
inline SweepRow run_sweep_point(const SweepConfig& cfg, int n, double p, std::uint64_t seed) {
  const auto nz = static_cast<std::size_t>(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SweepRow row{to_string(cfg.kind), n, 0.0, 0.0, cfg.b, cfg.periods, seed, 0.0, 0.0, 0.0};
  if (cfg.kind == SweepKind::wm) {
    std::vector<std::vector<double>> losses(cfg.periods, std::vector<double>(nz));
    for (auto& l : losses)
      for (auto& v : l) v = unit(rng);
    const auto r = wm_regret_check(losses, nz, p);
    row.eta = p;
    row.measured = r.regret;
    row.bound = r.bound;
  } else if (cfg.kind == SweepKind::permelearn) {
    std::vector<RealMatrix> losses(cfg.periods, RealMatrix(nz, nz, 0.0));
    for (auto& l : losses)
      for (auto& v : l.data()) v = unit(rng);
    const auto r = permelearn_bound_check(losses, nz, p);
    row.eta = p;
    row.measured = r.algorithm_loss;
    row.bound = r.bound;
  } else {
    ApproxMarket market(nz, {cfg.b, p, {}});
    const double lo = cfg.buys_only ? 0.0 : -cfg.max_trade;
    std::uniform_real_distribution<double> qty(lo, cfg.max_trade);
    for (std::size_t k = 0; k < cfg.trades; ++k) {
      const auto sec = random_subset_security(n, rng);
      market.trade(sec, qty(rng));
    }
    const double kappa = approx_kappa(cfg.b, p);
    const double nd = static_cast<double>(n);
    const double payout = market.worst_case_payout();
    row.eps = p;
    row.eta = 2.0 * p / cfg.b;
    row.periods = market.steps();
    row.measured = market.worst_case_loss();
    row.limit_bound = cfg.b * nd * std::log(nd);
    row.bound = kappa * row.limit_bound + (kappa - 1.0) * 2.0 * p * nd * static_cast<double>(market.steps());
    if (payout < 0.0) row.bound += (kappa - 1.0) * -payout;
  }
  return row;
}

/// Runs the grid across worker threads. Rows keep grid order (size-major,
/// seed-minor) whatever the thread count; each point is
/// seeded independently, so output is deterministic. threads = 0 uses the
/// hardware concurrency.
inline SweepResult run_sweep(const SweepConfig& cfg, unsigned threads = 0) {
  struct Point {
    int n;
    double p;
    std::uint64_t seed;
  };
  const auto& params = cfg.kind == SweepKind::approx ? cfg.eps : cfg.etas;
  std::vector<Point> grid;
  for (int n : cfg.sizes) {
    if (n < 1) throw InvalidInput("sweep sizes must be positive");
    for (double p : params)
      for (auto seed : cfg.seeds) grid.push_back({n, p, seed});
  }

  SweepResult res;
  res.rows.resize(grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < grid.size();) {
      try {
        res.rows[k] = run_sweep_point(cfg, grid[k].n, grid[k].p, grid[k].seed);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = grid.size();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return res;
}

}  // namespace lmsr

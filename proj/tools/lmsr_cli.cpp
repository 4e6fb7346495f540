#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmsr/lmsr.hpp"

namespace {

namespace fs = std::filesystem;

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kBadInput = 2,
  kCapacity = 3,
  kConvergence = 4,
  kDegenerate = 5,
};

/// Relative output paths resolve against LMSR_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("LMSR_OUTPUT_DIR"); dir && *dir) path = fs::path(dir) / path;
  }
  return path;
}

/// Writes to the named file, or stdout when the name is empty or "-".
void emit(const std::string& target, const std::string& text) {
  if (target.empty() || target == "-") {
    std::cout << text;
    return;
  }
  const auto path = output_path(target);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw lmsr::InvalidInput("cannot write " + path.string());
  out << text;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lmsr::InvalidInput("cannot open " + path);
  return in;
}

lmsr::Scenario load_scenario(const std::string& path) {
  auto in = open_input(path);
  return lmsr::parse_scenario(in);
}

std::vector<std::uint64_t> seed_list(std::size_t count, std::uint64_t first) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < count; ++k) seeds.push_back(first + k);
  return seeds;
}

struct Options {
  std::string scenario, security, output, input, kind, mode = "exact", trace_file, log_file;
  double quantity = 0.0, b = 1.0, eps = 0.01, delta = 1e-9, max_trade = 1.0;
  int n = 0;
  bool verify = false, trace = false, buys_only = false;
  std::vector<int> sizes;
  std::vector<double> etas, eps_grid;
  std::size_t seeds = 10, periods = 100, trades = 20;
  std::uint64_t first_seed = 1;
  unsigned threads = 0;
  lmsr::EnumerationLimits limits;
};

int cmd_price(const Options& o) {
  const auto session = lmsr::replay(load_scenario(o.scenario), o.limits);
  std::cout << lmsr::fixed9(session.price(o.security)) << "\n";
  return kOk;
}

int cmd_cost(const Options& o) {
  const auto session = lmsr::replay(load_scenario(o.scenario), o.limits);
  std::cout << lmsr::fixed9(session.cost()) << "\n";
  return kOk;
}

int cmd_trade(const Options& o) {
  auto session = lmsr::replay(load_scenario(o.scenario), o.limits);
  const double before = session.price(o.security);
  const double payment = session.buy(o.security, o.quantity);
  std::ostringstream out;
  out << "security,quantity,payment,price_before,price_after\n"
      << lmsr::text::csv_field(o.security) << "," << lmsr::fixed9(o.quantity) << "," << lmsr::fixed9(payment) << ","
      << lmsr::fixed9(before) << "," << lmsr::fixed9(session.price(o.security)) << "\n";
  emit(o.output, out.str());
  return kOk;
}

int report(const lmsr::RunReport& rep, const std::string& output) {
  emit(output, rep.to_csv());
  if (!rep.passed) std::cerr << "error: scenario checks failed\n";
  return rep.passed ? kOk : kCheckFailed;
}

int cmd_run_scenario(const Options& o) { return report(lmsr::run_scenario(load_scenario(o.scenario), o.limits), o.output); }

int cmd_approx_run(const Options& o) {
  auto in = open_input(o.log_file);
  lmsr::Scenario sc;
  sc.market = {lmsr::Family::approx, o.n, o.b, o.eps, o.delta, std::nullopt};
  if (o.n < 1) throw lmsr::InvalidInput("--n must be positive");
  for (const auto& e : lmsr::read_trade_log(in)) sc.trades.push_back({e.security, e.quantity, e.line});
  return report(lmsr::run_scenario(sc, o.limits), o.output);
}

int cmd_reduce(const Options& o) {
  lmsr::ReductionOptions opt;
  opt.b = o.b;
  opt.limits = o.limits;
  if (o.mode == "prices") opt.mode = lmsr::ReductionMode::prices;
  else if (o.mode == "cost") opt.mode = lmsr::ReductionMode::cost;
  else if (o.mode == "exact") opt.mode = lmsr::ReductionMode::exact;
  else throw lmsr::InvalidInput("unknown mode '" + o.mode + "'");

  auto in = open_input(o.input);
  lmsr::ReductionResult r;
  std::uint64_t oracle = 0;
  if (o.kind == "permanent") {
    const auto a = lmsr::read_int_matrix(in);
    r = opt.mode == lmsr::ReductionMode::cost ? lmsr::permanent_via_cost(a, opt) : lmsr::permanent_via_market(a, opt);
    if (o.verify) {
      const auto p = lmsr::permanent_exact(a.map([](int v) { return lmsr::BigInt(v); }));
      oracle = p.convert_to<std::uint64_t>();
    }
  } else if (o.kind == "linext") {
    const auto order = lmsr::read_partial_order(in);
    r = lmsr::linear_extensions_via_market(order, opt);
    if (o.verify) oracle = lmsr::count_linear_extensions_oracle(order);
  } else {
    const auto f = lmsr::read_dimacs_2cnf(in);
    r = lmsr::count_2sat_via_market(f, opt);
    if (o.verify) oracle = lmsr::count_sat_oracle(f);
  }
  std::cout << r.count << "\n";
  if (o.trace) emit(o.trace_file, lmsr::trace_csv(r.trace));
  if (o.verify) {
    if (oracle != r.count) {
      std::cerr << "error: market count " << r.count << " differs from oracle " << oracle << "\n";
      return kCheckFailed;
    }
    std::cerr << "verified against oracle: " << oracle << "\n";
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  lmsr::SweepConfig cfg;
  cfg.kind = lmsr::parse_sweep_kind(o.kind);
  cfg.sizes = o.sizes;
  cfg.etas = o.etas;
  cfg.eps = o.eps_grid;
  cfg.seeds = seed_list(o.seeds, o.first_seed);
  cfg.periods = o.periods;
  cfg.b = o.b;
  cfg.trades = o.trades;
  cfg.max_trade = o.max_trade;
  cfg.buys_only = o.buys_only;
  const auto res = lmsr::run_sweep(cfg, o.threads);
  emit(o.output, res.to_csv());
  if (!res.all_pass()) {
    std::cerr << "error: a bound was violated\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LMSR market maker: pricing, replay, reductions, and bound checks"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  Options o;
  app.add_option("--max-candidates", o.limits.max_candidates, "Enumeration cap on permutation markets")
      ->capture_default_str();
  app.add_option("--max-events", o.limits.max_events, "Enumeration cap on boolean markets")->capture_default_str();
  app.add_option("--max-ryser", o.limits.max_ryser_candidates, "Size cap for Ryser permanents")
      ->capture_default_str();

  auto* price = app.add_subcommand("price", "Replay a scenario, then print a security's price");
  price->add_option("scenario", o.scenario, "Scenario file")->required();
  price->add_option("security", o.security, "Security spec, e.g. <1|2>")->required();

  auto* cost = app.add_subcommand("cost", "Replay a scenario, then print the cost function value");
  cost->add_option("scenario", o.scenario, "Scenario file")->required();

  auto* trade = app.add_subcommand("trade", "Replay a scenario, then execute one more trade");
  trade->add_option("scenario", o.scenario, "Scenario file")->required();
  trade->add_option("security", o.security, "Security spec")->required();
  trade->add_option("quantity", o.quantity, "Shares to buy (negative sells)")->required();
  trade->add_option("-o,--output", o.output, "Output CSV (default stdout)");

  auto* run = app.add_subcommand("run-scenario", "Replay a scenario and check its invariants");
  run->add_option("scenario", o.scenario, "Scenario file")->required();
  run->add_option("-o,--output", o.output, "Report CSV (default stdout)");

  auto* approx = app.add_subcommand("approx-run", "Replay a trade log through the approximation market");
  approx->add_option("trade_log", o.log_file, "CSV step,security,quantity")->required();
  approx->add_option("--n", o.n, "Candidates")->required();
  approx->add_option("-b,--b", o.b, "Liquidity")->capture_default_str();
  approx->add_option("--eps", o.eps, "Chunk size")->capture_default_str();
  approx->add_option("--delta", o.delta, "Sinkhorn tolerance")->capture_default_str();
  approx->add_option("-o,--output", o.output, "Report CSV (default stdout)");

  auto* reduce = app.add_subcommand("reduce", "Count via a market construction");
  reduce->add_option("kind", o.kind, "permanent | linext | count2sat")
      ->required()
      ->check(CLI::IsMember({"permanent", "linext", "count2sat"}));
  reduce->add_option("input", o.input, "Matrix, edge list, or DIMACS file")->required();
  reduce->add_option("--mode", o.mode, "prices | cost | exact")
      ->capture_default_str()
      ->check(CLI::IsMember({"prices", "cost", "exact"}));
  reduce->add_option("-b,--b", o.b, "Liquidity")->capture_default_str();
  reduce->add_flag("--verify", o.verify, "Compare with the brute-force oracle");
  reduce->add_option("--trace", o.trace_file, "Write the per-period trace CSV (\"-\" for stdout)")
      ->expected(0, 1)
      ->default_str("-")
      ->each([&](const std::string&) { o.trace = true; });

  auto* sweep = app.add_subcommand("sweep", "Randomized bound-check sweep");
  sweep->add_option("kind", o.kind, "wm | permelearn | approx")
      ->required()
      ->check(CLI::IsMember({"wm", "permelearn", "approx"}));
  sweep->add_option("--n", o.sizes, "Sizes")->delimiter(',');
  sweep->add_option("--eta", o.etas, "Learning rates (wm, permelearn)")->delimiter(',');
  sweep->add_option("--eps", o.eps_grid, "Chunk sizes (approx)")->delimiter(',');
  sweep->add_option("--seeds", o.seeds, "Seeds per grid point")->capture_default_str();
  sweep->add_option("--first-seed", o.first_seed, "First seed")->capture_default_str();
  sweep->add_option("-T,--periods", o.periods, "Rounds per run (wm, permelearn)")->capture_default_str();
  sweep->add_option("-b,--b", o.b, "Liquidity (approx)")->capture_default_str();
  sweep->add_option("--trades", o.trades, "Lump trades per run (approx)")->capture_default_str();
  sweep->add_option("--max-trade", o.max_trade, "Largest lump quantity (approx)")->capture_default_str();
  sweep->add_flag("--buys-only", o.buys_only, "Only positive lump quantities (approx)");
  sweep->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  sweep->add_option("-o,--output", o.output, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*price) return cmd_price(o);
    if (*cost) return cmd_cost(o);
    if (*trade) return cmd_trade(o);
    if (*run) return cmd_run_scenario(o);
    if (*approx) return cmd_approx_run(o);
    if (*reduce) return cmd_reduce(o);
    if (*sweep) return cmd_sweep(o);
  } catch (const lmsr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kBadInput;
  } catch (const lmsr::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kBadInput;
  } catch (const lmsr::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kCapacity;
  } catch (const lmsr::ConvergenceError& e) {
    std::cerr << "convergence: " << e.what() << " (deviation " << e.deviation() << ")\n";
    return kConvergence;
  } catch (const lmsr::DegenerateInstance& e) {
    std::cerr << "degenerate instance: " << e.what() << "\n";
    return kDegenerate;
  }
  return kOk;
}

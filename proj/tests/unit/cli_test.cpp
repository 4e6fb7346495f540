#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
};

/// Runs the CLI with stderr discarded; captures stdout and the exit code.
Result cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" LMSR_CLI_PATH "\" " + args + " 2>/dev/null";
  Result r{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (const auto n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return "\"" LMSR_SAMPLES_DIR "/" + name + "\""; }

fs::path temp_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("lmsr_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(Cli, ReduceExamples) {
  EXPECT_EQ(cli("reduce permanent " + sample("ones_3x3.txt") + " --verify").out, "6\n");
  EXPECT_EQ(cli("reduce permanent " + sample("permanent_3x3.txt") + " --mode prices").out, "2\n");
  EXPECT_EQ(cli("reduce permanent " + sample("permanent_3x3.txt") + " --mode cost").out, "2\n");
  EXPECT_EQ(cli("reduce linext " + sample("empty_order.edges")).out, "24\n");
  EXPECT_EQ(cli("reduce linext " + sample("two_chains.edges") + " --verify").out, "6\n");
  EXPECT_EQ(cli("reduce count2sat " + sample("xor.cnf") + " --verify").out, "2\n");
  const auto r = cli("reduce count2sat " + sample("contradiction.cnf"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n");
}

TEST(Cli, ReduceTraceGoesToFile) {
  const auto dir = temp_dir("trace");
  const auto r = cli("reduce permanent " + sample("ones_3x3.txt") + " --trace t.csv",
                     "LMSR_OUTPUT_DIR=\"" + dir.string() + "\"");
  EXPECT_EQ(r.code, 0);
  std::ifstream in(dir / "t.csv");
  ASSERT_TRUE(in);
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("price_before"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, PriceCostTrade) {
  EXPECT_EQ(cli("price " + sample("pair_chain.scn") + " \"<1>2>\"").out, "0.857142857\n");
  EXPECT_EQ(cli("cost " + sample("empty_subset.scn")).out, "1.791759469\n");
  const auto t = cli("trade " + sample("pair_chain.scn") + " \"<2>1>\" 1");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out.substr(0, t.out.find('\n')), "security,quantity,payment,price_before,price_after");
}

TEST(Cli, RunScenarioAndApproxRun) {
  const auto r = cli("run-scenario " + sample("empty_subset.scn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# result=pass"), std::string::npos);
  const auto a = cli("approx-run " + sample("approx_log.csv") + " --n 4 --eps 0.05");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, cli("run-scenario " + sample("approx_trades.scn")).out);
}

TEST(Cli, OutputDirectoryForRelativePaths) {
  const auto dir = temp_dir("out");
  const auto r = cli("run-scenario " + sample("subset_trades.scn") + " -o nested/report.csv",
                     "LMSR_OUTPUT_DIR=\"" + dir.string() + "\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(dir / "nested" / "report.csv"));
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("run-scenario " + sample("malformed.scn")).code, 2);
  EXPECT_EQ(cli("run-scenario /nonexistent/file.scn").code, 2);
  EXPECT_EQ(cli("bogus").code, 2);
  EXPECT_EQ(cli("sweep nope").code, 2);

  const auto dir = temp_dir("codes");
  std::ofstream(dir / "cap.scn") << "market subset n=30 b=1\n";
  EXPECT_EQ(cli("cost \"" + (dir / "cap.scn").string() + "\"").code, 3);
  std::ofstream(dir / "conv.scn") << "market approx n=4 b=1 eps=0.05 delta=1e-300\n<1|1> 0.4\n";
  EXPECT_EQ(cli("run-scenario \"" + (dir / "conv.scn").string() + "\"").code, 4);
  fs::remove_all(dir);
}

TEST(Cli, Sweeps) {
  const auto empty = cli("sweep wm");
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "kind,n,eta,eps,b,T,seed,measured,bound,margin,limit_bound\n");
  const auto cfg = cli("--config " + sample("sweep.ini") + " sweep wm");
  EXPECT_EQ(cfg.code, 0);
  EXPECT_EQ(line_count(cfg.out), 61u);
  const auto p = cli("sweep permelearn --n 3 --eta 0.5 --seeds 3 -T 20");
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(line_count(p.out), 4u);
  const auto a = cli("sweep approx --n 3 --eps 0.1,0.05 --seeds 2 --trades 5");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(line_count(a.out), 5u);
  EXPECT_EQ(cli("sweep approx --n 3 --eps 0.1 --seeds 2").out, cli("sweep approx --n 3 --eps 0.1 --seeds 2").out);
}

}  // namespace

namespace {

TEST(Cli, LimitsAndThreadsOptions) {
  const auto dir = temp_dir("limits");
  std::ofstream(dir / "big.scn") << "market boolean N=21 b=1\n";
  const auto scn = "\"" + (dir / "big.scn").string() + "\"";
  EXPECT_EQ(cli("cost " + scn).code, 3);
  EXPECT_EQ(cli("--max-events 21 cost " + scn).code, 0);
  fs::remove_all(dir);
  const std::string sweep = "sweep wm --n 2,3 --eta 0.1 --seeds 4 -T 50";
  EXPECT_EQ(cli(sweep + " --threads 1").out, cli(sweep + " --threads 3").out);
}

}  // namespace

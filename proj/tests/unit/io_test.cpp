#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <variant>

#include "lmsr/lmsr.hpp"

namespace lmsr {
namespace {

template <class F>
std::size_t parse_error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Text, TrimCommentAndNumbers) {
  EXPECT_EQ(text::trim("  a b \t"), "a b");
  EXPECT_EQ(text::strip_comment("1 2 # three"), "1 2");
  long long i = 0;
  EXPECT_TRUE(text::try_int("+42", i));
  EXPECT_EQ(i, 42);
  EXPECT_FALSE(text::try_int("4x", i));
  double d = 0;
  EXPECT_TRUE(text::try_double("-1.5e-3", d));
  EXPECT_DOUBLE_EQ(d, -1.5e-3);
  EXPECT_FALSE(text::try_double("", d));
  EXPECT_EQ(parse_error_line([] { text::parse_int("x", 7, "n"); }), 7u);
}

TEST(Text, CsvQuoting) {
  const auto f = text::split_csv(R"(1,"<2|{1,2}>",0.3)", 1);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[1], "<2|{1,2}>");
  EXPECT_EQ(text::csv_field("<1|1>"), "<1|1>");
  EXPECT_EQ(text::csv_field("<2|{1,2}>"), "\"<2|{1,2}>\"");
  EXPECT_EQ(text::split_csv(text::csv_field("a,\"b\""), 1).at(0), "a,\"b\"");
}

TEST(SecuritySpec, SubsetForms) {
  const auto a = std::get<SubsetSpec>(parse_security("<1|2>"));
  EXPECT_EQ(a.security.cells(), (std::vector<std::pair<int, int>>{{0, 1}}));
  const auto b = std::get<SubsetSpec>(parse_security(" <2|{1,3}> "));
  EXPECT_EQ(b.security.cells().size(), 2u);
  const auto c = std::get<SubsetSpec>(parse_security("<{1,2}|3>"));
  for (auto [i, j] : c.security.cells()) EXPECT_EQ(j, 2);
  EXPECT_THROW(parse_security("<{1,2}|{1}>"), InvalidInput);
  EXPECT_THROW(parse_security("<0|1>"), InvalidInput);
}

TEST(SecuritySpec, PairBooleanGeneric) {
  const auto p = std::get<PairSpec>(parse_security("<3>1>"));
  EXPECT_EQ(p.above, 2);
  EXPECT_EQ(p.below, 0);
  const auto o = std::get<BoolSpec>(parse_security("<1 or -2>"));
  EXPECT_FALSE(o.conjunction);
  const auto n = std::get<BoolSpec>(parse_security("<-3 and 4>"));
  EXPECT_TRUE(n.conjunction);
  const auto g = std::get<GenericSpec>(parse_security("<{3,1,3}>"));
  EXPECT_EQ(g.outcomes, (std::vector<std::uint64_t>{0, 2}));
  EXPECT_TRUE(std::get<GenericSpec>(parse_security("<all>")).all);
  EXPECT_THROW(parse_security("1|2"), InvalidInput);
  EXPECT_THROW(parse_security("<{1}>2>"), InvalidInput);
  EXPECT_THROW(parse_security("<0 or 1>"), InvalidInput);
  EXPECT_THROW(parse_security("<{1,2>"), InvalidInput);
}

TEST(Readers, IntMatrix) {
  std::istringstream in("# comment\n2\n1 2 # row\n3 4\n");
  const auto m = read_int_matrix(in);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m(1, 0), 3);
  std::istringstream short_in("2\n1 2 3\n");
  EXPECT_THROW(read_int_matrix(short_in), ParseError);
}

TEST(Readers, PartialOrder) {
  std::istringstream in("n 4\n1 2\n3 4\n");
  const auto o = read_partial_order(in);
  EXPECT_EQ(count_linear_extensions_oracle(o), 6u);
  std::istringstream bad("1 2\n2 x\n");
  EXPECT_EQ(parse_error_line([&] { read_partial_order(bad); }), 2u);
}

TEST(Readers, Dimacs2Cnf) {
  std::istringstream in("c xor\np cnf 2 2\n1 2 0\n-1 -2 0\n");
  EXPECT_EQ(count_sat_oracle(read_dimacs_2cnf(in)), 2u);
  std::istringstream three("p cnf 3 1\n1 2 3 0\n");
  EXPECT_THROW(read_dimacs_2cnf(three), ParseError);
  std::istringstream count("p cnf 2 2\n1 2 0\n");
  EXPECT_THROW(read_dimacs_2cnf(count), ParseError);
  std::istringstream range("p cnf 2 1\n1 3 0\n");
  EXPECT_THROW(read_dimacs_2cnf(range), ParseError);
}

TEST(Readers, LossFiles) {
  std::istringstream m("t,i,j,loss\n1,1,2,0.5\n2,2,2,1\n");
  const auto ls = read_matrix_losses(m, 2);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_DOUBLE_EQ(ls[0](0, 1), 0.5);
  EXPECT_DOUBLE_EQ(ls[0](0, 0), 0.0);
  EXPECT_DOUBLE_EQ(ls[1](1, 1), 1.0);
  std::istringstream v("1,1,0.25\n1,3,1\n3,2,0.5\n");
  const auto vs = read_vector_losses(v);
  ASSERT_EQ(vs.size(), 3u);
  EXPECT_EQ(vs[0].size(), 3u);
  EXPECT_DOUBLE_EQ(vs[2][1], 0.5);
  EXPECT_DOUBLE_EQ(vs[1][0], 0.0);
}

TEST(Readers, TradeLog) {
  std::istringstream in("step,security,quantity\n1,<1|1>,0.4\n2,\"<2|{1,2}>\",-0.3\n");
  const auto log = read_trade_log(in);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].security, "<2|{1,2}>");
  EXPECT_DOUBLE_EQ(log[1].quantity, -0.3);
  EXPECT_EQ(log[1].line, 3u);
  std::istringstream bad("1,<1|1>,0.4\n2,<1|,0.1\n");
  EXPECT_EQ(parse_error_line([&] { read_trade_log(bad); }), 2u);
}

}  // namespace
}  // namespace lmsr

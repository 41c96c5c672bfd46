#include <gtest/gtest.h>

#include "cli_support.hpp"
#include "gradua/dsl/parser.hpp"
#include "gradua/dsl/run.hpp"

using namespace gradua;
using namespace gradua::dsl;
namespace fs = std::filesystem;

namespace {

ParseError parse_error(const std::string& source) {
  try {
    parse(source);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for:\n" << source;
  return ParseError(0, 0, "none");
}

Json run_source(const std::string& source) { return Runner().run(parse(source)).report; }

}  // namespace

TEST(Parse, ChartAndAction) {
  const auto p = parse("chart V (x:1, y:2)  action h on V { x -> t*x; y -> t^2*y + (t - t^2)*x }");
  ASSERT_EQ(p.statements.size(), 2u);
  ASSERT_TRUE(std::holds_alternative<ChartDecl>(p.statements[0]));
  const auto& a = std::get<ActionDecl>(p.statements[1]);
  EXPECT_EQ(a.name, "h");
  EXPECT_EQ(a.chart, "V");
  ASSERT_EQ(a.entries.size(), 2u);
  EXPECT_EQ(print(a.entries[1].value), "t^2*y + (t - t^2)*x");
  EXPECT_TRUE(same(parse(print(p)), p));
}

TEST(Parse, EmptyInput) {
  EXPECT_TRUE(parse("").statements.empty());
  EXPECT_TRUE(parse("  # only a comment\n\n").statements.empty());
}

TEST(Parse, DanglingOperatorIsReportedAtTheOperator) {
  const auto e = parse_error("chart P (x:0)\naction h on P { x -> t* }");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 23u);
  EXPECT_NE(e.message().find("'*'"), std::string::npos);
}

TEST(Parse, Diagnostics) {
  EXPECT_EQ(parse_error("chart V (x:1)\nchart V (y:1)").line(), 2u);
  EXPECT_NE(parse_error("chart V (x:1)\nmap f : V -> W { x = x }").message().find("W"), std::string::npos);
  // y belongs to W, not to V.
  EXPECT_NE(parse_error("chart V (x:1)\nchart W (y:1)\nmap f : V -> W { y = y }").message().find("y"),
            std::string::npos);
  EXPECT_EQ(parse_error("chart V (x:1)\nmap f : V -> V { x = 1/x }").line(), 2u);
  EXPECT_EQ(parse_error("chart V (x:1)\nmap f : V -> V { x = x^65 }").line(), 2u);
  EXPECT_EQ(parse_error("chart V (x:1)\nmap f : V -> V { x = x }\nprolong f order 13").line(), 3u);
  // t is free in plain charts but reserved once the chart carries an action.
  EXPECT_NO_THROW(parse("chart V (t:1)"));
  EXPECT_EQ(parse_error("chart V (t:1)\naction h on V { t -> t }").line(), 2u);
  EXPECT_EQ(parse_error("chart V (x:1)\nanalyze-action nope").line(), 2u);
  EXPECT_EQ(parse_error("chart V (x:1)\naction h on V { x -> t*x }\nanalyze-action h at (1, 2)").line(), 3u);
  EXPECT_EQ(parse_error("report yaml").column(), 8u);
}

TEST(Parse, RoundTripFixpointOnCorpus) {
  const auto files = gradua::testing::program_corpus();
  ASSERT_GE(files.size(), 7u);
  for (const auto& f : files) {
    const auto p = parse(gradua::testing::read_file(f));
    const std::string once = print(p);
    const auto q = parse(once);
    EXPECT_TRUE(same(p, q)) << f;
    EXPECT_EQ(print(q), once) << f;
  }
}

TEST(Run, EmptyReport) {
  EXPECT_EQ(emit_json(run_source("")), "{\n  \"version\": \"1\",\n  \"results\": []\n}\n");
}

TEST(Run, WorkedExamples) {
  const auto r = run_source(
      "chart P (x:0, y:0)\naction h on P { x -> t*x; y -> 0 }\nanalyze-action h\n"
      "chart W (x1:1, x2:1, y:2)\nmap f : W -> W { x1 = x1; x2 = x2; y = y + x1^2 }\ncheck-morphism f");
  const auto& h = r["results"][0];
  EXPECT_EQ(h["semigroup"], true);
  EXPECT_EQ(h["monoid"], false);
  EXPECT_EQ(h["witnesses"][0]["variable"], "y");
  EXPECT_EQ(h["witnesses"][0]["expected"], "y");
  EXPECT_EQ(h["witnesses"][0]["actual"], "0");
  EXPECT_EQ(r["results"][1]["graded"], true);
  EXPECT_EQ(r["results"][1]["status"], "pass");
}

TEST(Run, ProlongIdentityIsEchoed) {
  const auto r = run_source("chart M (x:0, y:0)\nmap id : M -> M { x = x; y = y }\nprolong id order 3");
  for (const auto& [k, v] : r["results"][0]["pullbacks"].items()) EXPECT_EQ(v, k);
}

TEST(Run, CoreErrorsBecomeEntries) {
  // h_0 sends everything to x = 1, so the origin is not a valid default base point.
  const auto r = run_source("chart M (x:0)\naction h on M { x -> t*x + 1 - t }\nanalyze-action h\nanalyze-action h at (1)");
  EXPECT_EQ(r["results"][0]["status"], "error");
  EXPECT_EQ(r["results"][0]["error"]["kind"], "domain-error");
  EXPECT_EQ(r["results"][1]["status"], "pass");
  EXPECT_EQ(r["results"][1]["homogenizer"]["x'"], "x - 1");
}

TEST(Run, ReportFormatDirective) {
  const auto res = Runner().run(parse("report text"));
  ASSERT_TRUE(res.format.has_value());
  EXPECT_EQ(*res.format, "text");
}

TEST(Cli, GoldenReportsAreByteStable) {
  for (const auto& f : gradua::testing::golden_programs()) {
    auto golden = f;
    golden.replace_extension(".json");
    const auto first = gradua::testing::run_cli("run \"" + f.string() + "\"");
    const auto second = gradua::testing::run_cli("run \"" + f.string() + "\"");
    EXPECT_EQ(first.out, second.out) << f;
    EXPECT_EQ(first.out, gradua::testing::read_file(golden)) << f;
  }
}

TEST(Cli, ExitCodes) {
  const fs::path dir(GRADUA_GOLDEN_DIR);
  EXPECT_EQ(gradua::testing::run_cli("run \"" + (dir / "quadratic_shear.gr").string() + "\"").exit_code, 0);
  EXPECT_EQ(gradua::testing::run_cli("run \"" + (dir / "semigroup_not_monoid.gr").string() + "\"").exit_code, 1);
  EXPECT_EQ(gradua::testing::run_cli("run /nonexistent/file.gr").exit_code, 2);
  EXPECT_EQ(gradua::testing::run_cli("frobnicate").exit_code, 2);
  EXPECT_EQ(gradua::testing::run_cli("check -", "printf 'chart V (x:1' |").exit_code, 2);
  EXPECT_EQ(gradua::testing::run_cli("check -", "printf 'chart V (x:1)' |").exit_code, 0);
  EXPECT_EQ(gradua::testing::run_cli("run \"" + (dir / "quadratic_shear.gr").string() + "\"",
                                     "GRADUA_SCHEMA_VERSION=7")
                .exit_code,
            2);
  EXPECT_EQ(gradua::testing::run_cli("run \"" + (dir / "quadratic_shear.gr").string() + "\"",
                                     "GRADUA_SCHEMA_VERSION=1")
                .exit_code,
            0);
}

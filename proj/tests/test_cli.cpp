#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sys/wait.h>

#include "qwalk/cli.hpp"

using namespace qwalk;
using namespace qwalk::cli;

namespace {

RunConfig config(std::string command, std::string graph) {
  RunConfig c;
  c.command = std::move(command);
  c.graph = std::move(graph);
  return c;
}

CommandOutput run_ok(const RunConfig& c) {
  auto out = run(c);
  EXPECT_EQ(out.exit_code, 0) << out.message;
  return out;
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / ("qwalk_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(ComplexLiteral, Forms) {
  EXPECT_EQ(parse_complex_literal("1"), Complex(1, 0));
  EXPECT_EQ(parse_complex_literal("-0.5"), Complex(-0.5, 0));
  EXPECT_EQ(parse_complex_literal("i"), Complex(0, 1));
  EXPECT_EQ(parse_complex_literal("-i"), Complex(0, -1));
  EXPECT_EQ(parse_complex_literal("2i"), Complex(0, 2));
  EXPECT_EQ(parse_complex_literal("0.5+0.5i"), Complex(0.5, 0.5));
  EXPECT_EQ(parse_complex_literal(" 1e-3 - 2i "), Complex(1e-3, -2));
  EXPECT_EQ(parse_complex_literal("1e+2+1e-1i"), Complex(100, 0.1));
  EXPECT_EQ(parse_complex_literal("1-i"), Complex(1, -1));
  EXPECT_THROW(parse_complex_literal("abc"), ConfigError);
  EXPECT_THROW(parse_complex_literal(""), ConfigError);
}

TEST(StartState, MiniLanguage) {
  const auto g = resolve_graph("square");
  const auto plus = parse_start("00:+", g, 2);
  EXPECT_NEAR(std::abs(plus(0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(plus(1) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  int v = -1;
  const auto basis = parse_start("10:basis-2", g, 2, &v);
  EXPECT_EQ(v, 2);
  EXPECT_EQ(basis(5), Complex(1.0));
  const auto custom = parse_start("3:[1, i]", g, 2);
  EXPECT_NEAR(std::abs(custom(7) - Complex(0, 1) / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_LT((parse_start("1", g, 2).segment(2, 2) - uniform_coin_state(2)).norm(), 1e-15);
  EXPECT_THROW(parse_start("0:[1]", g, 2), ConfigError);
  EXPECT_THROW(parse_start("0:basis-3", g, 2), ConfigError);
  EXPECT_THROW(parse_start("4:uniform", g, 2), ConfigError);
  EXPECT_THROW(parse_start("0:[0,0]", g, 2), ConfigError);
}

TEST(Graphs, BuiltinsAndFiles) {
  EXPECT_EQ(resolve_graph("k2").num_vertices(), 2);
  EXPECT_EQ(resolve_graph("hypercube-4").num_vertices(), 16);
  EXPECT_EQ(resolve_graph("hypercube:3").hypercube_n, 3);
  EXPECT_EQ(resolve_graph("cayley:S3").colored->degree(), 3);
  EXPECT_EQ(*resolve_graph("cayley:Z2^3").colored, build_hypercube(3));
  const auto path = scratch() / "tri.txt";
  std::ofstream(path) << "3\n0 1\n1 2\n2 0\n";
  const auto tri = resolve_graph("file:" + path.string());
  EXPECT_FALSE(tri.colored.has_value());
  EXPECT_EQ(tri.simple.edges.size(), 3u);
  EXPECT_THROW(resolve_graph("nonsense-graph"), ConfigError);
}

TEST(Analyze, Hypercube4GroverRank32) {
  auto c = config("analyze", "hypercube:4");
  c.final_vertex = "15";
  const auto out = run_ok(c);
  EXPECT_EQ(out.report["schema"], kSchema);
  EXPECT_EQ(out.report["rank_P"], 32);
  EXPECT_EQ(out.report["dim"], 64);
  EXPECT_EQ(out.report["vertices"][0]["classification"], "PARTIALLY-TRAPPED");
}

TEST(Analyze, K2AndContinuousS3) {
  EXPECT_EQ(run_ok(config("analyze", "k2")).report["rank_P"], 0);
  auto c = config("analyze", "cayley:S3");
  c.continuous = true;
  const auto out = run_ok(c);
  EXPECT_GE(out.report["rank_P"].get<int>(), 1);
  EXPECT_EQ(out.report["walk"]["kind"], "continuous");
}

TEST(Analyze, ContinuousPlainGraphFile) {
  const auto path = scratch() / "path3.txt";
  std::ofstream(path) << "3\n0 1\n1 2\n";
  auto c = config("analyze", path.string());
  c.continuous = true;
  c.final_vertex = "1";
  const auto out = run_ok(c);
  // the antisymmetric path mode (1, 0, -1) vanishes at the middle vertex
  EXPECT_EQ(out.report["rank_P"], 1);
  c.continuous = false;
  EXPECT_EQ(run(c).exit_code, exit_config);
}

TEST(Hit, SquareGroverTauTwo) {
  auto c = config("hit", "square");
  c.start = "00:+";
  c.final_vertex = "11";
  const auto out = run_ok(c);
  EXPECT_EQ(out.report["classification"], "FINITE");
  EXPECT_EQ(out.report["method"], "BOTH");
  EXPECT_NEAR(out.report["tau"].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(out.report["tau_truncated"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(out.csv.substr(0, out.csv.find('\n')), "t,p,cumulative,survival");
  EXPECT_NE(out.csv.find("\n2,1,1,"), std::string::npos);
}

TEST(Hit, K2TauOne) {
  auto c = config("hit", "k2");
  c.start = "0";
  c.final_vertex = "1";
  EXPECT_NEAR(run_ok(c).report["tau"].get<double>(), 1.0, 1e-12);
}

TEST(Hit, Hypercube4DftInfinite) {
  auto c = config("hit", "hypercube-4");
  c.coin = "dft";
  c.start = "0:uniform";
  c.final_vertex = "15";
  c.T = 400;
  const auto out = run_ok(c);
  EXPECT_EQ(out.report["classification"], "INFINITE");
  EXPECT_LT(out.report["escape_mass"].get<double>(), 1.0);
  EXPECT_TRUE(out.report["tau"].is_null());
}

TEST(Hit, GuardSkipsOrRefusesClosedForm) {
  auto c = config("hit", "hypercube:3");
  c.start = "000:uniform";
  c.max_dim_guard = 16;
  c.T = 500;
  const auto auto_run = run_ok(c);
  EXPECT_EQ(auto_run.report["method"], "TRUNCATED");
  EXPECT_NE(auto_run.report["closed_form"].get<std::string>().find("skipped"), std::string::npos);
  EXPECT_EQ(auto_run.report["classification"], "FINITE");
  c.method = "closed";
  EXPECT_EQ(run(c).exit_code, exit_resource);
}

TEST(Scan, GroverAndDftVertexZero) {
  auto c = config("scan", "hypercube-4");
  c.vertices = {"0"};
  const auto grover = run_ok(c);
  const auto& v = grover.report["vertices"][0];
  EXPECT_EQ(v["classification"], "PARTIALLY-TRAPPED");
  ASSERT_EQ(v["zero_eigenvectors"].size(), 1u);
  for (const auto& amp : v["zero_eigenvectors"][0]) {
    EXPECT_NEAR(std::hypot(amp[0].get<double>(), amp[1].get<double>()), 0.5, 1e-6);
  }
  c.coin = "dft";
  EXPECT_EQ(run_ok(c).report["vertices"][0]["classification"], "ALL-INFINITE");
  auto sq = config("scan", "square");
  sq.vertices = {"0"};
  EXPECT_EQ(run_ok(sq).report["vertices"][0]["classification"], "UNTRAPPED");
  EXPECT_EQ(run(config("scan", "square")).exit_code, exit_config);
}

TEST(Predict, Verdicts) {
  RunConfig c;
  c.command = "predict";
  c.group = "S6";
  auto out = run_ok(c);
  EXPECT_EQ(out.report["verdict"], "SUFFICIENT");
  EXPECT_EQ(out.report["max_irrep_dim"], 16);
  EXPECT_EQ(out.report["coin_dim"], 15);
  c.group = "Sn:5";
  EXPECT_EQ(run_ok(c).report["verdict"], "INCONCLUSIVE");
  c.group = "S3";
  c.continuous = true;
  EXPECT_EQ(run_ok(c).report["verdict"], "SUFFICIENT");
  c.group = "Z2^3";
  EXPECT_EQ(run_ok(c).report["verdict"], "INCONCLUSIVE");
}

TEST(Predict, NonAbelianNeedsTable) {
  RunConfig c;
  c.command = "predict";
  c.group = "perms:1 0 2;1 2 0";
  c.coin_dim = 1;
  const auto out = run(c);
  EXPECT_EQ(out.exit_code, exit_insufficient);
  EXPECT_NE(out.message.find("character table"), std::string::npos);
  const auto path = scratch() / "s3.txt";
  std::ofstream(path) << "classes e t c\nsizes 1 3 2\n1 1 1\n1 -1 1\n2 0 -1\n";
  c.character_table = path.string();
  EXPECT_EQ(run_ok(c).report["verdict"], "SUFFICIENT");
}

TEST(Config, ErrorsMapToExitCodes) {
  auto c = config("analyze", "square");
  c.tol_rank = -1.0;
  EXPECT_EQ(run(c).exit_code, exit_config);
  c = config("analyze", "");
  EXPECT_EQ(run(c).exit_code, exit_config);
  c = config("hit", "square");
  c.start = "0";
  c.T = 0;
  EXPECT_EQ(run(c).exit_code, exit_config);
  c = config("frobnicate", "square");
  EXPECT_EQ(run(c).exit_code, exit_config);
  c = config("analyze", "square");
  c.coin = "no-such-coin";
  EXPECT_EQ(run(c).exit_code, exit_config);
  c = config("analyze", "hypercube:3");
  c.final_vertex = "8";
  EXPECT_EQ(run(c).exit_code, exit_config);
}

TEST(Reports, TwelveSignificantDigits) {
  EXPECT_EQ(num(1.0 / 3.0).dump(), "0.333333333333");
  EXPECT_EQ(num(2.0).dump(), "2.0");
  EXPECT_TRUE(num(std::nan("")).is_null());
  EXPECT_EQ(fmt12(1.0 / 7.0), "0.142857142857");
}

TEST(Reports, DeterministicApartFromTimestamp) {
  auto c = config("hit", "hypercube:3");
  c.coin = "random";
  c.seed = 11;
  c.start = "0:[1,i,0]";
  c.T = 200;
  auto a = run_ok(c).report, b = run_ok(c).report;
  a.erase("generated_at");
  b.erase("generated_at");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Executable, WritesReportAndCsv) {
  const auto dir = scratch();
  const std::string exe = QWALK_CLI_PATH;
  const auto out = dir / "square.json";
  EXPECT_EQ(shell(exe + " hit --graph square --start 00:+ --final 11 --T 20 --out " + out.string()), 0);
  const std::string report = slurp(out);
  EXPECT_NE(report.find("\"schema\": \"qwalk-result/1\""), std::string::npos);
  EXPECT_TRUE(std::regex_search(report, std::regex("\"generated_at\": \"\\d{4}-\\d\\d-\\d\\dT")));
  const std::string csv = slurp(dir / "square.csv");
  EXPECT_EQ(csv.substr(0, 24), "t,p,cumulative,survival\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
}

TEST(Executable, ExitCodes) {
  const std::string exe = QWALK_CLI_PATH;
  EXPECT_EQ(shell(exe + " analyze --graph square --tol-rank 0 2>/dev/null"), 2);
  EXPECT_EQ(shell(exe + " analyze --graph square --bogus 2>/dev/null >/dev/null"), 2);
  EXPECT_EQ(shell(exe + " hit --graph hypercube:3 --start 0 --method closed --max-dim-guard 8 2>/dev/null"), 3);
  EXPECT_EQ(shell(exe + " predict --group 'perms:1 0 2;1 2 0' --coin-dim 2 2>/dev/null"), 4);
  EXPECT_EQ(shell(exe + " predict --group S6 --out /dev/null"), 0);
}

TEST(Executable, GraphCommandRoundTrips) {
  const auto dir = scratch();
  const std::string exe = QWALK_CLI_PATH;
  const auto file = dir / "s3.graph";
  ASSERT_EQ(shell(exe + " graph --graph cayley:S3 --out " + file.string()), 0);
  std::ifstream in(file);
  const auto g = read_graph(in);
  ASSERT_TRUE(g.colored.has_value());
  EXPECT_EQ(g.colored->num_vertices(), 6);
  EXPECT_EQ(shell(exe + " analyze --graph " + file.string() + " --out /dev/null"), 0);
}

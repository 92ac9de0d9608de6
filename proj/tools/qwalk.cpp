#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qwalk/cli.hpp"

namespace {

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream f(path);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  qwalk::cli::RunConfig cfg;
  CLI::App app{"Coined and continuous quantum walks: trapped subspaces and hitting times"};
  app.add_option("command", cfg.command, "graph | analyze | hit | scan | predict")
      ->required()
      ->check(CLI::IsMember({"graph", "analyze", "hit", "scan", "predict"}));
  app.add_option("--graph", cfg.graph, "k2, square, hypercube:N, cayley:S<n>, cayley:Z2^<n>, or a graph file");
  app.add_option("--coin", cfg.coin, "grover, dft, random[:seed], or file:PATH")->capture_default_str();
  app.add_option("--final", cfg.final_vertex, "final vertex (default: last vertex)");
  app.add_option("--start", cfg.start, "initial state, e.g. 0:uniform, 00:+, 3:basis-2, 0:[1,i]");
  app.add_option("--vertex", cfg.vertices, "vertex to report (repeatable)");
  app.add_option("--group", cfg.group, "S<n>, Z<n>, Z2^<n>, or perms:<images>;...");
  app.add_option("--character-table", cfg.character_table, "character table file");
  app.add_option("--coin-dim", cfg.coin_dim, "coin dimension for predict");
  app.add_option("--method", cfg.method, "auto | closed | truncated")->capture_default_str();
  app.add_option("--tol-cluster", cfg.tol_cluster)->capture_default_str();
  app.add_option("--tol-rank", cfg.tol_rank)->capture_default_str();
  app.add_option("--tail-tol", cfg.tail_tol)->capture_default_str();
  app.add_option("--T", cfg.T, "truncation horizon")->capture_default_str();
  app.add_option("--out", cfg.out, "result file (default: stdout)");
  app.add_option("--csv", cfg.csv, "p(t) series file (default: next to --out)");
  app.add_option("--seed", cfg.seed, "seed for random coins")->capture_default_str();
  app.add_flag("--continuous", cfg.continuous, "continuous-time walk on the adjacency matrix");
  app.add_option("--max-dim-guard", cfg.max_dim_guard, "largest walk dimension for superoperators")
      ->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qwalk::cli::exit_config;
  }

  const auto result = qwalk::cli::run(cfg);
  if (result.exit_code != qwalk::cli::exit_ok) {
    std::cerr << "qwalk: " << result.message << "\n";
    return result.exit_code;
  }
  bool ok = true;
  if (cfg.command == "graph") {
    ok = write_text(cfg.out, result.graph_text);
  } else {
    ok = write_text(cfg.out, result.report.dump(2) + "\n");
    if (!result.csv.empty()) {
      std::string csv_path = cfg.csv;
      if (csv_path.empty() && !cfg.out.empty() && cfg.out != "-") {
        csv_path = std::filesystem::path(cfg.out).replace_extension(".csv").string();
      }
      if (!csv_path.empty()) ok = write_text(csv_path, result.csv) && ok;
    }
  }
  if (!ok) {
    std::cerr << "qwalk: cannot write output\n";
    return qwalk::cli::exit_config;
  }
  return 0;
}

#pragma once
// Command layer behind the qwalk executable. Each command maps a RunConfig to
// a CommandOutput (exit code, JSON report, optional CSV or graph text); the
// executable only parses flags and writes files.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/finite_group.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/group.hpp"
#include "qwalk/hitting.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "qwalk-result/1";
inline constexpr Index kMaxDenseDim = 2048;

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_resource = 3, exit_insufficient = 4 };

struct RunConfig {
  std::string command;
  std::string graph;
  std::string coin = "grover";
  std::string final_vertex;  // empty: last vertex
  std::string start;
  std::vector<std::string> vertices;
  std::string group;
  std::string character_table;
  int coin_dim = 0;  // 0: derived from the group
  std::string method = "auto";
  double tol_cluster = kDefaultClusterTol;
  double tol_rank = linalg::kDefaultRankTol;
  double tail_tol = kDefaultTailTol;
  int T = 1000;
  std::string out;
  std::string csv;
  std::uint64_t seed = 1;
  bool continuous = false;
  Index max_dim_guard = kDefaultSuperoperatorGuard;
};

struct CommandOutput {
  int exit_code = exit_ok;
  Json report;
  std::string csv;         // p(t) series for hit
  std::string graph_text;  // graph file for graph
  std::string message;     // error text for non-zero exits
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rounds to 12 significant digits so the JSON writer's shortest round-trip
/// form never prints more.
inline Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline Json num(Complex z) { return Json::array({num(z.real()), num(z.imag())}); }

inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

inline int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < INT32_MIN || v > INT32_MAX) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    throw ConfigError("bad " + what + " '" + s + "'");
  }
}

inline bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace detail

/// Complex literal: "a", "bi", "a+bi", "a-bi", "i", "-i".
inline Complex parse_complex_literal(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("empty complex literal");
  auto real_of = [&](const std::string& t) -> double {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::logic_error&) {
      throw ConfigError("bad complex literal '" + text + "'");
    }
    if (pos != t.size()) throw ConfigError("bad complex literal '" + text + "'");
    return v;
  };
  auto imag_of = [&](std::string t) -> double {
    t.pop_back();  // the trailing 'i'
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return real_of(t);
  };
  if (s.back() != 'i') return {real_of(s), 0.0};
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size() - 1; k > 0; --k) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, imag_of(s)};
  return {real_of(s.substr(0, split)), imag_of(s.substr(split))};
}

/// Graph resolved from a spec string.
struct LoadedGraph {
  std::optional<ColoredGraph> colored;
  SimpleGraph simple;
  std::string label;
  int hypercube_n = 0;  // > 0 for hypercubes: vertices accept n-digit bit strings

  int num_vertices() const { return simple.num_vertices; }
};

/// Builtins: k2, square, hypercube:N (or hypercube-N), cayley:S<n> (all
/// transpositions), cayley:Z2^<n> (unit vectors). Anything else, or
/// file:PATH, is read as a graph file.
inline LoadedGraph resolve_graph(const std::string& spec) {
  if (spec.empty()) throw ConfigError("no graph given (--graph)");
  const std::string s = detail::lower(spec);
  auto cube = [](int n, std::string label) {
    LoadedGraph g;
    g.colored = build_hypercube(n);
    g.simple = SimpleGraph::from_colored(*g.colored);
    g.label = std::move(label);
    g.hypercube_n = n;
    return g;
  };
  if (s == "k2") return cube(1, "k2");
  if (s == "square") return cube(2, "square");
  for (const char* prefix : {"hypercube:", "hypercube-"}) {
    if (detail::starts_with(s, prefix)) {
      const int n = detail::parse_int(s.substr(std::string(prefix).size()), "hypercube dimension");
      return cube(n, "hypercube-" + std::to_string(n));
    }
  }
  for (const char* prefix : {"cayley:", "cayley-"}) {
    if (!detail::starts_with(s, prefix)) continue;
    const std::string g = s.substr(std::string(prefix).size());
    LoadedGraph out;
    if (detail::starts_with(g, "z2^")) {
      const int n = detail::parse_int(g.substr(3), "group parameter");
      const FiniteGroup grp = elementary_abelian_2(n);
      std::vector<int> gens;
      for (int i = 0; i < n; ++i) gens.push_back(1 << i);
      out.colored = build_cayley(grp, gens);
      out.label = "cayley-Z2^" + std::to_string(n);
    } else if (detail::starts_with(g, "s")) {
      const int n = detail::parse_int(g.substr(1), "group parameter");
      const FiniteGroup grp = symmetric_group(n);
      out.colored = build_cayley(grp, transposition_elements(grp, n));
      out.label = "cayley-S" + std::to_string(n);
    } else {
      throw ConfigError("unknown Cayley group '" + g + "' (use S<n> or Z2^<n>)");
    }
    out.simple = SimpleGraph::from_colored(*out.colored);
    return out;
  }
  const std::string path = detail::starts_with(s, "file:") ? spec.substr(5) : spec;
  std::ifstream in(path);
  if (!in) throw ConfigError("unknown graph '" + spec + "' and no such file");
  GraphFile f = read_graph(in);
  LoadedGraph out;
  out.colored = std::move(f.colored);
  out.simple = std::move(f.simple);
  out.label = std::filesystem::path(path).filename().string();
  return out;
}

/// Decimal index, or an n-digit bit string (most significant bit first) on Q_n.
inline int parse_vertex(const std::string& text, const LoadedGraph& g) {
  const std::string t = detail::trim(text);
  if (g.hypercube_n > 0 && static_cast<int>(t.size()) == g.hypercube_n &&
      t.find_first_not_of("01") == std::string::npos) {
    return std::stoi(t, nullptr, 2);
  }
  const int v = detail::parse_int(t, "vertex");
  if (v < 0 || v >= g.num_vertices()) {
    throw ConfigError("vertex " + t + " out of range [0, " + std::to_string(g.num_vertices()) + ")");
  }
  return v;
}

inline int resolve_final(const RunConfig& cfg, const LoadedGraph& g) {
  return cfg.final_vertex.empty() ? g.num_vertices() - 1 : parse_vertex(cfg.final_vertex, g);
}

/// "vertex", "vertex:uniform", "vertex:+", "vertex:basis-k" or
/// "vertex:[c1,c2,...]" with complex literals. The coin part is normalized.
inline ComplexVector parse_start(const std::string& text, const LoadedGraph& g, int degree, int* vertex_out = nullptr) {
  if (text.empty()) throw ConfigError("no initial state given (--start)");
  const auto colon = text.find(':');
  const std::string vpart = text.substr(0, colon);
  const std::string cpart = colon == std::string::npos ? "uniform" : detail::trim(text.substr(colon + 1));
  const int v = parse_vertex(vpart, g);
  if (vertex_out) *vertex_out = v;
  ComplexVector coin;
  const std::string c = detail::lower(cpart);
  if (c == "uniform" || c == "+") {
    coin = uniform_coin_state(degree);
  } else if (detail::starts_with(c, "basis-")) {
    const int k = detail::parse_int(c.substr(6), "basis index");
    if (k < 1 || k > degree) throw ConfigError("basis index must lie in 1.." + std::to_string(degree));
    coin = ComplexVector::Zero(degree);
    coin(k - 1) = 1.0;
  } else if (c.size() >= 2 && c.front() == '[' && c.back() == ']') {
    std::vector<Complex> amps;
    std::stringstream ss(c.substr(1, c.size() - 2));
    for (std::string tok; std::getline(ss, tok, ',');) amps.push_back(parse_complex_literal(tok));
    if (static_cast<int>(amps.size()) != degree) {
      throw ConfigError("coin state has " + std::to_string(amps.size()) + " amplitudes, degree is " +
                        std::to_string(degree));
    }
    coin = Eigen::Map<ComplexVector>(amps.data(), degree);
  } else {
    throw ConfigError("bad coin state '" + cpart + "' (uniform, +, basis-k or [c1,...])");
  }
  if (coin.norm() == 0.0) throw ConfigError("coin state is zero");
  return localized_state(g.num_vertices(), degree, v, coin);
}

/// grover, dft, random[:seed], or file:PATH.
inline Coin resolve_coin(const RunConfig& cfg, int degree) {
  const std::string c = detail::lower(cfg.coin);
  if (c == "grover") return grover_coin(degree);
  if (c == "dft") return dft_coin(degree);
  if (c == "random") return random_coin(degree, cfg.seed);
  if (detail::starts_with(c, "random:")) {
    return random_coin(degree, static_cast<std::uint64_t>(detail::parse_int(c.substr(7), "seed")));
  }
  const std::string path = detail::starts_with(c, "file:") ? cfg.coin.substr(5) : cfg.coin;
  std::ifstream in(path);
  if (!in) throw ConfigError("unknown coin '" + cfg.coin + "' and no such file");
  Coin coin = read_coin(in);
  if (coin.dim != degree) {
    throw ConfigError("coin dimension " + std::to_string(coin.dim) + " does not match degree " +
                      std::to_string(degree));
  }
  return coin;
}

inline WalkOperator build_walk(const RunConfig& cfg, const LoadedGraph& g) {
  if (cfg.continuous) {
    WalkOperator w = adjacency_hamiltonian(g.simple);
    if (g.colored) w.graph = g.colored;
    return w;
  }
  if (!g.colored) throw ConfigError("discrete walks need a colored graph; pass --continuous for plain graphs");
  const Index dim = static_cast<Index>(g.colored->num_vertices()) * g.colored->degree();
  if (dim > kMaxDenseDim) {
    throw Error(ErrorCode::resource, "walk dimension " + std::to_string(dim) + " exceeds the dense limit " +
                                         std::to_string(kMaxDenseDim));
  }
  return discrete_evolution(*g.colored, resolve_coin(cfg, g.colored->degree()));
}

inline void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands{"graph", "analyze", "hit", "scan", "predict"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  if (!(cfg.tol_cluster > 0.0) || !(cfg.tol_rank > 0.0) || !(cfg.tail_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (cfg.T < 1) throw ConfigError("T must be at least 1");
  if (cfg.max_dim_guard < 1) throw ConfigError("--max-dim-guard must be positive");
  if (cfg.command != "predict" && cfg.graph.empty()) throw ConfigError("no graph given (--graph)");
  if (cfg.command == "predict" && cfg.group.empty() && cfg.character_table.empty() && cfg.graph.empty()) {
    throw ConfigError("predict needs --group, --character-table or a Cayley --graph");
  }
  if (cfg.method != "auto" && cfg.method != "closed" && cfg.method != "truncated") {
    throw ConfigError("--method must be auto, closed or truncated");
  }
}

inline Json header(const RunConfig& cfg) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = cfg.command;
  j["generated_at"] = utc_timestamp();
  return j;
}

inline Json graph_json(const LoadedGraph& g) {
  Json j;
  j["label"] = g.label;
  j["num_vertices"] = g.num_vertices();
  j["degree"] = g.colored ? Json(g.colored->degree()) : Json(nullptr);
  j["num_edges"] = g.simple.edges.size();
  j["connected"] = g.colored ? Json(g.colored->connected()) : Json(nullptr);
  return j;
}

inline Json walk_json(const WalkOperator& w) {
  Json j;
  j["kind"] = w.kind == WalkKind::discrete ? "discrete" : "continuous";
  j["coin"] = w.coin ? Json(w.coin->label()) : Json(nullptr);
  j["dim"] = w.dim();
  return j;
}

struct Analysis {
  EigenspaceClustering clustering;
  TrappedSubspace trapped;
};

inline Analysis analyze_walk(const WalkOperator& w, int final_vertex, const RunConfig& cfg) {
  Analysis a{cluster_eigenspaces(w, cfg.tol_cluster), {}};
  a.trapped = build_trapped_projector(a.clustering, final_vertex, cfg.tol_rank);
  return a;
}

inline Json vertex_report(const Analysis& a, const WalkOperator& w, int v, const RunConfig& cfg, bool with_vectors) {
  Json j;
  j["vertex"] = v;
  if (w.kind == WalkKind::continuous) {
    const double overlap = vertex_trap_overlap_continuous(a.trapped, v);
    j["trapped_overlap"] = num(overlap);
    j["classification"] = overlap > cfg.tol_rank ? to_string(VertexTrapClass::all_infinite)
                                                 : to_string(VertexTrapClass::untrapped);
    return j;
  }
  const auto r = coin_overlap_matrix(a.trapped, v, w.degree, cfg.tol_rank);
  Json ev = Json::array();
  for (Index k = 0; k < r.eigenvalues.size(); ++k) ev.push_back(num(r.eigenvalues(k)));
  j["C_v_eigenvalues"] = ev;
  j["classification"] = to_string(classify_vertex(r));
  if (with_vectors) {
    auto columns = [](const ComplexMatrix& m) {
      Json cols = Json::array();
      for (Index c = 0; c < m.cols(); ++c) {
        Json col = Json::array();
        for (Index k = 0; k < m.rows(); ++k) col.push_back(num(m(k, c)));
        cols.push_back(col);
      }
      return cols;
    };
    j["C_v_eigenvectors"] = columns(r.eigenvectors);
    j["zero_eigenvectors"] = columns(r.zero_eigenvectors);
  }
  return j;
}

inline CommandOutput cmd_graph(const RunConfig& cfg) {
  const LoadedGraph g = resolve_graph(cfg.graph);
  if (!g.colored) throw ConfigError("graph has no edge coloring; only colored graphs can be written");
  CommandOutput out;
  std::ostringstream os;
  write_graph(os, *g.colored);
  out.graph_text = os.str();
  out.report = header(cfg);
  out.report["graph"] = graph_json(g);
  return out;
}

inline CommandOutput cmd_analyze(const RunConfig& cfg) {
  const LoadedGraph g = resolve_graph(cfg.graph);
  const WalkOperator w = build_walk(cfg, g);
  const int final_vertex = resolve_final(cfg, g);
  const Analysis a = analyze_walk(w, final_vertex, cfg);

  CommandOutput out;
  Json& j = out.report = header(cfg);
  j["graph"] = graph_json(g);
  j["walk"] = walk_json(w);
  j["final_vertex"] = final_vertex;
  j["tolerances"] = {{"cluster", num(cfg.tol_cluster)}, {"rank", num(cfg.tol_rank)}};
  j["rank_P"] = a.trapped.rank;
  j["dim"] = w.dim();
  j["num_clusters"] = a.clustering.clusters.size();
  j["max_multiplicity"] = a.clustering.max_multiplicity();
  j["clustering_unstable"] = a.clustering.unstable;
  Json clusters = Json::array();
  for (const auto& c : a.clustering.clusters) {
    Index trapped = 0;
    for (const auto& t : a.trapped.contributions)
      if (t.phase == c.phase) trapped = t.trapped_dim;
    clusters.push_back({{w.kind == WalkKind::discrete ? "phase" : "energy", num(c.phase)},
                        {"multiplicity", c.multiplicity},
                        {"trapped_dim", trapped}});
  }
  j["clusters"] = clusters;
  std::vector<int> vertices;
  if (cfg.vertices.empty()) {
    for (int v = 0; v < std::min(g.num_vertices(), 32); ++v) vertices.push_back(v);
  } else {
    for (const auto& s : cfg.vertices) vertices.push_back(parse_vertex(s, g));
  }
  Json vs = Json::array();
  for (int v : vertices) vs.push_back(vertex_report(a, w, v, cfg, false));
  j["vertices"] = vs;
  return out;
}

inline std::string series_csv(const HitSeries& s) {
  std::string csv = "t,p,cumulative,survival\n";
  double cumulative = 0.0;
  for (std::size_t k = 0; k < s.p.size(); ++k) {
    cumulative += s.p[k];
    csv += std::to_string(k + 1) + "," + fmt12(s.p[k]) + "," + fmt12(cumulative) + "," + fmt12(s.survival[k]) + "\n";
  }
  return csv;
}

inline CommandOutput cmd_hit(const RunConfig& cfg) {
  if (cfg.continuous) throw ConfigError("measured hitting times are defined for discrete walks only");
  const LoadedGraph g = resolve_graph(cfg.graph);
  const WalkOperator w = build_walk(cfg, g);
  const int final_vertex = resolve_final(cfg, g);
  int start_vertex = 0;
  const ComplexVector psi = parse_start(cfg.start, g, w.degree, &start_vertex);
  const auto setup = MeasuredWalkSetup::make_pure(w, final_vertex, psi);
  const Analysis a = analyze_walk(w, final_vertex, cfg);
  const double overlap = (a.trapped.projector * setup.rho0).norm();
  const bool within_guard = w.dim() <= cfg.max_dim_guard;

  std::optional<HittingResult> closed, truncated;
  std::string closed_status = "not requested";
  if (cfg.method != "truncated") {
    if (within_guard || overlap > cfg.tol_rank) {
      closed = hitting_time_closed_form(setup, a.trapped, cfg.tol_rank, cfg.max_dim_guard);
      closed_status = "ran";
    } else if (cfg.method == "closed") {
      check_superoperator_guard(w.dim(), cfg.max_dim_guard);
    } else {
      closed_status = "skipped: dimension " + std::to_string(w.dim()) + " exceeds the superoperator guard " +
                      std::to_string(cfg.max_dim_guard);
    }
  }
  HitSeries series;
  if (cfg.method != "closed") {
    series = hit_probability_series_pure(w, final_vertex, psi, cfg.T);
    truncated = summarize_series(series, cfg.tail_tol);
  }

  HittingResult r;
  if (closed && truncated) {
    r = *closed;
    r.method = Method::both;
    r.truncation_T = truncated->truncation_T;
    r.survival = truncated->survival;
    if (closed->classification == Classification::infinite) r.total_hit_probability = truncated->total_hit_probability;
  } else {
    r = closed ? *closed : *truncated;
    if (!closed) {
      r.trapped_overlap = overlap;
      r.escape_mass = trace_outside(a.trapped, setup.rho0);
    }
  }

  CommandOutput out;
  Json& j = out.report = header(cfg);
  j["graph"] = graph_json(g);
  j["walk"] = walk_json(w);
  j["start"] = cfg.start;
  j["start_vertex"] = start_vertex;
  j["final_vertex"] = final_vertex;
  j["classification"] = to_string(r.classification);
  j["method"] = to_string(r.method);
  j["tau"] = r.tau ? num(*r.tau) : Json(nullptr);
  j["tau_closed_form"] = closed && closed->tau ? num(*closed->tau) : Json(nullptr);
  j["tau_truncated"] = truncated ? num(*truncated->tau) : Json(nullptr);
  j["total_hit_probability"] = r.total_hit_probability ? num(*r.total_hit_probability) : Json(nullptr);
  j["total_hit_probability_closed_form"] =
      closed && closed->total_hit_probability ? num(*closed->total_hit_probability) : Json(nullptr);
  j["escape_mass"] = r.escape_mass ? num(*r.escape_mass) : Json(nullptr);
  j["escape_mass_note"] = "Tr{(I - P) rho0}, an upper bound on the total hitting probability";
  j["trapped_overlap"] = r.trapped_overlap ? num(*r.trapped_overlap) : Json(nullptr);
  j["rank_P"] = a.trapped.rank;
  j["residual"] = r.residual ? num(*r.residual) : Json(nullptr);
  j["truncation_T"] = r.truncation_T ? Json(*r.truncation_T) : Json(nullptr);
  j["survival"] = r.survival ? num(*r.survival) : Json(nullptr);
  j["closed_form"] = closed_status;
  j["tolerances"] = {{"cluster", num(cfg.tol_cluster)}, {"rank", num(cfg.tol_rank)}, {"tail", num(cfg.tail_tol)}};
  j["max_dim_guard"] = cfg.max_dim_guard;
  if (truncated) out.csv = series_csv(series);
  return out;
}

inline CommandOutput cmd_scan(const RunConfig& cfg) {
  const LoadedGraph g = resolve_graph(cfg.graph);
  const WalkOperator w = build_walk(cfg, g);
  const int final_vertex = resolve_final(cfg, g);
  std::vector<int> vertices;
  for (const auto& s : cfg.vertices) vertices.push_back(parse_vertex(s, g));
  if (vertices.empty() && !cfg.start.empty()) vertices.push_back(parse_vertex(cfg.start.substr(0, cfg.start.find(':')), g));
  if (vertices.empty()) throw ConfigError("scan needs a vertex (--vertex)");
  const Analysis a = analyze_walk(w, final_vertex, cfg);

  CommandOutput out;
  Json& j = out.report = header(cfg);
  j["graph"] = graph_json(g);
  j["walk"] = walk_json(w);
  j["final_vertex"] = final_vertex;
  j["tolerances"] = {{"cluster", num(cfg.tol_cluster)}, {"rank", num(cfg.tol_rank)}};
  j["rank_P"] = a.trapped.rank;
  Json vs = Json::array();
  for (int v : vertices) vs.push_back(vertex_report(a, w, v, cfg, true));
  j["vertices"] = vs;
  return out;
}

/// Group specs: S<n>, Z<n>, Z2^<n>, or perms:<images>;<images>... with
/// 0-based images separated by spaces or commas. A character table file can
/// stand alone or accompany a non-Abelian group.
inline CommandOutput cmd_predict(const RunConfig& cfg) {
  std::optional<CharacterTable> table;
  if (!cfg.character_table.empty()) {
    std::ifstream in(cfg.character_table);
    if (!in) throw ConfigError("cannot open character table '" + cfg.character_table + "'");
    table = read_character_table(in);
  }
  const std::string spec = detail::lower(cfg.group);
  std::optional<FiniteGroup> group;
  std::optional<int> sn;
  int default_coin = 0;
  if (detail::starts_with(spec, "z2^")) {
    const int n = detail::parse_int(spec.substr(3), "group parameter");
    group = elementary_abelian_2(n);
    default_coin = n;
  } else if (detail::starts_with(spec, "sn:") || (detail::starts_with(spec, "s") && spec.size() > 1 &&
                                                  std::isdigit(static_cast<unsigned char>(spec[1])))) {
    sn = detail::parse_int(spec.substr(spec[1] == 'n' ? 3 : 1), "group parameter");
    default_coin = *sn * (*sn - 1) / 2;
  } else if (detail::starts_with(spec, "z") && spec.size() > 1) {
    group = cyclic_group(detail::parse_int(spec.substr(1), "group parameter"));
  } else if (detail::starts_with(spec, "perms:")) {
    std::vector<Permutation> gens;
    std::stringstream ss(spec.substr(6));
    for (std::string part; std::getline(ss, part, ';');) {
      std::replace(part.begin(), part.end(), ',', ' ');
      std::istringstream is(part);
      Permutation p;
      for (std::string tok; is >> tok;) p.push_back(detail::parse_int(tok, "permutation image"));
      if (!p.empty()) gens.push_back(std::move(p));
    }
    group = FiniteGroup::from_permutations(gens, cfg.group);
  } else if (spec.empty() && !cfg.graph.empty()) {
    const LoadedGraph g = resolve_graph(cfg.graph);
    if (!g.colored || !g.colored->cayley()) throw ConfigError("graph carries no Cayley group; use --group");
    group = g.colored->cayley()->group;
    default_coin = g.colored->degree();
  } else if (!spec.empty()) {
    throw ConfigError("unknown group '" + cfg.group + "' (S<n>, Z<n>, Z2^<n>, perms:...)");
  }
  const int coin_dim = cfg.coin_dim > 0 ? cfg.coin_dim : default_coin;

  HittingPrediction p;
  if (cfg.continuous) {
    if (sn) p = predict_infinite_hitting_continuous(SymmetricGroupLabel{*sn});
    else if (group) p = predict_infinite_hitting_continuous(*group);
    else {
      const auto dims = table->dimensions();
      p = predict_continuous_from_abelian("table", *std::max_element(dims.begin(), dims.end()) == 1);
    }
  } else {
    if (coin_dim < 1) throw ConfigError("no default coin dimension for this group; pass --coin-dim");
    if (sn) p = predict_infinite_hitting_discrete(SymmetricGroupLabel{*sn}, coin_dim);
    else if (group) p = predict_infinite_hitting_discrete(*group, table ? &*table : nullptr, coin_dim);
    else p = predict_infinite_hitting_discrete(*table, coin_dim);
  }

  CommandOutput out;
  Json& j = out.report = header(cfg);
  j["mode"] = cfg.continuous ? "continuous" : "discrete";
  j["group"] = p.group_label;
  j["abelian"] = p.abelian;
  j["verdict"] = to_string(p.verdict);
  j["max_irrep_dim"] = p.max_irrep_dim == 0 ? Json(nullptr) : Json(p.max_irrep_dim);
  j["coin_dim"] = cfg.continuous ? Json(nullptr) : Json(coin_dim);
  j["reason"] = p.reason;
  if (sn) j["irrep_dims"] = sn_irrep_dims(*sn).dims;
  return out;
}

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::resource: return exit_resource;
    case ErrorCode::insufficient_data: return exit_insufficient;
    default: return exit_config;
  }
}

/// Runs one command; library and configuration errors become exit codes.
inline CommandOutput run(const RunConfig& cfg) {
  try {
    validate(cfg);
    if (cfg.command == "graph") return cmd_graph(cfg);
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "hit") return cmd_hit(cfg);
    if (cfg.command == "scan") return cmd_scan(cfg);
    return cmd_predict(cfg);
  } catch (const ConfigError& e) {
    return CommandOutput{exit_config, nullptr, "", "", e.what()};
  } catch (const Error& e) {
    return CommandOutput{exit_code_for(e.code()), nullptr, "", "", e.what()};
  } catch (const std::bad_alloc&) {
    return CommandOutput{exit_resource, nullptr, "", "", "out of memory"};
  }
}

}  // namespace qwalk::cli

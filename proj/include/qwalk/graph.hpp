#pragma once
// d-regular, d-edge-colored undirected graphs. Vertices are 0..N-1 and colors
// are 1..d; neighbor(v, i) is the vertex reached from v along color i.

#include <deque>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/finite_group.hpp"

namespace qwalk {

struct CayleyInfo {
  FiniteGroup group;
  std::vector<int> generators;  // element index of the generator for color i+1
};

class ColoredGraph {
 public:
  /// neighbors[v * d + (i - 1)] = v(i). Throws if the coloring is not a proper
  /// involutive d-coloring of a simple graph.
  static ColoredGraph from_neighbors(int num_vertices, int degree, std::vector<int> neighbors) {
    if (num_vertices < 2) throw Error(ErrorCode::invalid_dimension, "graph needs at least 2 vertices");
    if (degree < 1) throw Error(ErrorCode::invalid_dimension, "degree must be positive");
    if (static_cast<long long>(neighbors.size()) != 1LL * num_vertices * degree) {
      throw Error(ErrorCode::dimension_mismatch, "neighbor table must have N*d entries");
    }
    ColoredGraph g;
    g.n_ = num_vertices;
    g.d_ = degree;
    g.nbr_ = std::move(neighbors);
    g.validate();
    g.connected_ = g.compute_connected();
    return g;
  }

  int num_vertices() const { return n_; }
  int degree() const { return d_; }
  bool connected() const { return connected_; }

  int neighbor(int v, int color) const { return nbr_[static_cast<std::size_t>(v) * d_ + (color - 1)]; }

  const std::vector<int>& neighbor_table() const { return nbr_; }

  /// Group metadata for graphs made by build_cayley; null otherwise.
  const CayleyInfo* cayley() const { return cayley_.get(); }

  struct Edge {
    int u;
    int v;
    int color;
  };

  /// Each undirected edge once, with u < v, ordered by (u, color).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int u = 0; u < n_; ++u)
      for (int i = 1; i <= d_; ++i)
        if (u < neighbor(u, i)) out.push_back({u, neighbor(u, i), i});
    return out;
  }

  friend bool operator==(const ColoredGraph& a, const ColoredGraph& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.nbr_ == b.nbr_;
  }

  void attach_cayley(CayleyInfo info) { cayley_ = std::make_shared<const CayleyInfo>(std::move(info)); }

 private:
  void validate() const {
    for (int v = 0; v < n_; ++v) {
      for (int i = 1; i <= d_; ++i) {
        const int w = neighbor(v, i);
        std::ostringstream where;
        where << "vertex " << v << " color " << i;
        if (w < 0 || w >= n_) throw Error(ErrorCode::range, where.str() + ": neighbor out of range");
        if (w == v) throw Error(ErrorCode::coloring_impossible, where.str() + ": self-loop");
        if (neighbor(w, i) != v) {
          throw Error(ErrorCode::coloring_impossible, where.str() + ": coloring is not involutive");
        }
        for (int j = 1; j < i; ++j) {
          if (neighbor(v, j) == w) {
            throw Error(ErrorCode::coloring_impossible, where.str() + ": parallel edge");
          }
        }
      }
    }
  }

  bool compute_connected() const {
    std::vector<char> seen(n_, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int i = 1; i <= d_; ++i) {
        const int w = neighbor(v, i);
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          queue.push_back(w);
        }
      }
    }
    return count == n_;
  }

  int n_ = 0;
  int d_ = 0;
  std::vector<int> nbr_;
  bool connected_ = false;
  std::shared_ptr<const CayleyInfo> cayley_;
};

/// Vertex and color permutation. color_perm[i - 1] is the image of color i
/// (values 1..d); it is the identity for direction-preserving automorphisms.
struct PermutationAutomorphism {
  std::vector<int> vertex_perm;
  std::vector<int> color_perm;
};

/// Hypercube Q_n: vertex v is the n-bit value, color i flips bit i-1.
inline ColoredGraph build_hypercube(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_dimension, "hypercube dimension must be at least 1");
  if (n > 20) throw Error(ErrorCode::range, "hypercube dimension above 20 is not supported");
  const int count = 1 << n;
  std::vector<int> nbr(static_cast<std::size_t>(count) * n);
  for (int v = 0; v < count; ++v)
    for (int i = 1; i <= n; ++i) nbr[static_cast<std::size_t>(v) * n + (i - 1)] = v ^ (1 << (i - 1));
  return ColoredGraph::from_neighbors(count, n, std::move(nbr));
}

/// Right Cayley graph: vertex g joins g*s_i along color i.
inline ColoredGraph build_cayley(const FiniteGroup& group, const std::vector<int>& generators) {
  if (generators.empty()) throw Error(ErrorCode::invalid_generator, "generator list is empty");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const int s = generators[i];
    if (s < 0 || s >= group.order()) {
      throw Error(ErrorCode::invalid_generator, "generator " + std::to_string(s) + " is not a group element");
    }
    if (s == group.identity()) {
      throw Error(ErrorCode::invalid_generator, "identity element is in the generator set");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (generators[j] == s) {
        throw Error(ErrorCode::invalid_generator, "generator " + std::to_string(s) + " listed twice");
      }
    }
    if (group.mul(s, s) != group.identity()) {
      throw Error(ErrorCode::coloring_impossible,
                  "generator " + std::to_string(s) + " (color " + std::to_string(i + 1) +
                      ") is not an involution, so the Cayley graph cannot be edge-colored");
    }
  }
  const int n = group.order();
  const int d = static_cast<int>(generators.size());
  std::vector<int> nbr(static_cast<std::size_t>(n) * d);
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < d; ++i) nbr[static_cast<std::size_t>(g) * d + i] = group.mul(g, generators[i]);
  ColoredGraph out = ColoredGraph::from_neighbors(n, d, std::move(nbr));
  out.attach_cayley(CayleyInfo{group, generators});
  return out;
}

inline bool is_automorphism(const ColoredGraph& g, const PermutationAutomorphism& a) {
  if (static_cast<int>(a.vertex_perm.size()) != g.num_vertices() ||
      static_cast<int>(a.color_perm.size()) != g.degree()) {
    throw Error(ErrorCode::dimension_mismatch, "automorphism size does not match the graph");
  }
  if (!is_bijection(a.vertex_perm) || !is_bijection(a.color_perm, 1)) {
    throw Error(ErrorCode::range, "automorphism components must be bijections");
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int i = 1; i <= g.degree(); ++i) {
      if (a.vertex_perm[g.neighbor(v, i)] != g.neighbor(a.vertex_perm[v], a.color_perm[i - 1])) {
        return false;
      }
    }
  }
  return true;
}

/// The |G| left translations g -> a*g of a Cayley graph.
inline std::vector<PermutationAutomorphism> left_translations(const ColoredGraph& g) {
  const CayleyInfo* info = g.cayley();
  if (info == nullptr) throw Error(ErrorCode::missing_metadata, "graph was not built by build_cayley");
  std::vector<int> identity_colors(g.degree());
  for (int i = 0; i < g.degree(); ++i) identity_colors[i] = i + 1;
  std::vector<PermutationAutomorphism> out;
  const FiniteGroup& grp = info->group;
  for (int a = 0; a < grp.order(); ++a) {
    PermutationAutomorphism t{std::vector<int>(grp.order()), identity_colors};
    for (int x = 0; x < grp.order(); ++x) t.vertex_perm[x] = grp.mul(a, x);
    out.push_back(std::move(t));
  }
  return out;
}

/// Plain undirected simple graph, used by continuous walks that need no coloring.
struct SimpleGraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  static SimpleGraph from_colored(const ColoredGraph& g) {
    SimpleGraph s;
    s.num_vertices = g.num_vertices();
    for (const auto& e : g.edges()) s.edges.emplace_back(e.u, e.v);
    return s;
  }
};

namespace detail {

inline std::optional<std::vector<long long>> parse_ints(const std::string& line) {
  std::istringstream is(line);
  std::vector<long long> out;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(tok, &pos);
      if (pos != tok.size()) return std::nullopt;
      out.push_back(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return out;
}

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] inline void parse_fail(int line_no, const std::string& msg) {
  throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace detail

/// Parsed graph file: a colored graph when the header gives "N d", a plain
/// undirected graph when it gives only "N".
struct GraphFile {
  std::optional<ColoredGraph> colored;
  SimpleGraph simple;
};

/// Graph file: '#' comments, header "N d", then one "u v color" line per edge.
/// A header of just "N" introduces uncolored "u v" edge lines.
inline GraphFile read_graph(std::istream& in) {
  std::string raw;
  int line_no = 0;
  std::optional<std::vector<long long>> header;
  int header_line = 0;
  std::vector<std::pair<int, std::vector<long long>>> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto ints = detail::parse_ints(line);
    if (!ints) detail::parse_fail(line_no, "expected integers, got '" + line + "'");
    if (!header) {
      if (ints->size() != 1 && ints->size() != 2) detail::parse_fail(line_no, "header must be 'N d' or 'N'");
      header = *ints;
      header_line = line_no;
    } else {
      rows.emplace_back(line_no, *ints);
    }
  }
  if (!header) throw Error(ErrorCode::parse, "line 0: empty graph file");
  const long long n = (*header)[0];
  if (n < 2 || n > 1000000) detail::parse_fail(header_line, "vertex count must be in [2, 1000000]");
  const bool colored = header->size() == 2;
  GraphFile out;
  out.simple.num_vertices = static_cast<int>(n);

  if (!colored) {
    std::vector<std::vector<char>> seen;
    for (const auto& [ln, r] : rows) {
      if (r.size() != 2) detail::parse_fail(ln, "edge line must be 'u v'");
      if (r[0] < 0 || r[0] >= n || r[1] < 0 || r[1] >= n) detail::parse_fail(ln, "vertex out of range");
      if (r[0] == r[1]) detail::parse_fail(ln, "self-loop");
      for (const auto& e : out.simple.edges) {
        if ((e.first == r[0] && e.second == r[1]) || (e.first == r[1] && e.second == r[0])) {
          detail::parse_fail(ln, "duplicate edge");
        }
      }
      out.simple.edges.emplace_back(static_cast<int>(r[0]), static_cast<int>(r[1]));
    }
    return out;
  }

  const long long d = (*header)[1];
  if (d < 1 || d > n - 1) detail::parse_fail(header_line, "degree must be in [1, N-1]");
  std::vector<int> nbr(static_cast<std::size_t>(n * d), -1);
  for (const auto& [ln, r] : rows) {
    if (r.size() != 3) detail::parse_fail(ln, "edge line must be 'u v color'");
    const long long u = r[0], v = r[1], c = r[2];
    if (u < 0 || u >= n || v < 0 || v >= n) detail::parse_fail(ln, "vertex out of range");
    if (c < 1 || c > d) detail::parse_fail(ln, "color out of range 1..d");
    if (u == v) detail::parse_fail(ln, "self-loop");
    auto& a = nbr[static_cast<std::size_t>(u * d + c - 1)];
    auto& b = nbr[static_cast<std::size_t>(v * d + c - 1)];
    if (a != -1) detail::parse_fail(ln, "vertex " + std::to_string(u) + " already has an edge of color " + std::to_string(c));
    if (b != -1) detail::parse_fail(ln, "vertex " + std::to_string(v) + " already has an edge of color " + std::to_string(c));
    for (long long j = 0; j < d; ++j) {
      if (nbr[static_cast<std::size_t>(u * d + j)] == v) detail::parse_fail(ln, "parallel edge");
    }
    a = static_cast<int>(v);
    b = static_cast<int>(u);
  }
  for (long long v = 0; v < n; ++v) {
    for (long long c = 1; c <= d; ++c) {
      if (nbr[static_cast<std::size_t>(v * d + c - 1)] == -1) {
        detail::parse_fail(line_no, "vertex " + std::to_string(v) + " has no edge of color " + std::to_string(c));
      }
    }
  }
  out.colored = ColoredGraph::from_neighbors(static_cast<int>(n), static_cast<int>(d), std::move(nbr));
  out.simple = SimpleGraph::from_colored(*out.colored);
  return out;
}

inline void write_graph(std::ostream& out, const ColoredGraph& g) {
  out << g.num_vertices() << ' ' << g.degree() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.color << '\n';
}

}  // namespace qwalk

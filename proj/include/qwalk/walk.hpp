#pragma once
// Coins, shift operators and evolution operators. The walk Hilbert space is
// vertex-major: basis state (v, i) has index v * d + (i - 1).

#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk {

inline Index basis_index(int vertex, int color, int degree) {
  return static_cast<Index>(vertex) * degree + (color - 1);
}

enum class CoinKind { grover, dft, custom, random };

inline const char* to_string(CoinKind k) {
  switch (k) {
    case CoinKind::grover: return "GROVER";
    case CoinKind::dft: return "DFT";
    case CoinKind::custom: return "CUSTOM";
    case CoinKind::random: return "RANDOM";
  }
  return "?";
}

struct Coin {
  int dim = 0;
  ComplexMatrix matrix;
  CoinKind kind = CoinKind::custom;
  std::uint64_t seed = 0;  // meaningful for random coins only

  std::string label() const {
    return kind == CoinKind::random ? "RANDOM(" + std::to_string(seed) + ")" : to_string(kind);
  }
};

inline constexpr double kCoinUnitaryTol = 1e-12;

/// Reflection about the uniform coin state: 2|s><s| - I.
inline Coin grover_coin(int d) {
  if (d < 1) throw Error(ErrorCode::range, "coin dimension must be at least 1");
  ComplexMatrix m = ComplexMatrix::Constant(d, d, Complex(2.0 / d, 0.0));
  m.diagonal().array() -= 1.0;
  return Coin{d, std::move(m), CoinKind::grover, 0};
}

/// Discrete Fourier matrix, entry (j, k) = omega^(j k) / sqrt(d).
inline Coin dft_coin(int d) {
  if (d < 1) throw Error(ErrorCode::range, "coin dimension must be at least 1");
  ComplexMatrix m(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      // reduce j*k mod d first so large powers keep full accuracy
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) / d;
      m(j, k) = std::polar(norm, angle);
    }
  }
  return Coin{d, std::move(m), CoinKind::dft, 0};
}

/// Haar-distributed unitary from a seeded complex Gaussian matrix (QR with
/// the phases of R's diagonal divided out).
inline Coin random_coin(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::range, "coin dimension must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix z(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) z(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return Coin{d, std::move(q), CoinKind::random, seed};
}

inline Coin custom_coin(ComplexMatrix m, double tol = kCoinUnitaryTol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::dimension_mismatch, "coin matrix must be square and non-empty");
  }
  const double defect = linalg::unitarity_defect(m);
  if (defect > tol) {
    std::ostringstream os;
    os << "coin is not unitary, ||C^dagger C - I|| = " << defect;
    throw Error(ErrorCode::unitarity_violation, os.str());
  }
  const int d = static_cast<int>(m.rows());
  return Coin{d, std::move(m), CoinKind::custom, 0};
}

/// Coin file: one matrix row per line, entries written "re,im" and separated
/// by whitespace; '#' starts a comment.
inline Coin read_coin(std::istream& in, double tol = kCoinUnitaryTol) {
  std::vector<std::vector<Complex>> rows;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::istringstream is(hash == std::string::npos ? raw : raw.substr(0, hash));
    std::vector<Complex> row;
    for (std::string tok; is >> tok;) {
      const auto comma = tok.find(',');
      try {
        if (comma == std::string::npos) throw std::invalid_argument(tok);
        const std::string a = tok.substr(0, comma), b = tok.substr(comma + 1);
        std::size_t pa = 0, pb = 0;
        const double re = std::stod(a, &pa), im = std::stod(b, &pb);
        if (pa != a.size() || pb != b.size()) throw std::invalid_argument(tok);
        row.emplace_back(re, im);
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected 're,im', got '" + tok + "'");
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": row length differs from first row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::parse, "coin file has no rows");
  if (rows.size() != rows.front().size()) {
    throw Error(ErrorCode::dimension_mismatch, "coin matrix is not square");
  }
  const auto d = static_cast<Index>(rows.size());
  ComplexMatrix m(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c) m(r, c) = rows[r][c];
  return custom_coin(std::move(m), tol);
}

/// S = sum_v sum_i |v(i), i><v, i|.
inline ComplexMatrix shift_operator(const ColoredGraph& g) {
  const int d = g.degree();
  const Index dim = static_cast<Index>(g.num_vertices()) * d;
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int i = 1; i <= d; ++i) s(basis_index(g.neighbor(v, i), i, d), basis_index(v, i, d)) = 1.0;
  return s;
}

/// Hypercube shift written as sum_i X_(bit i-1) (x) |i><i|, with X acting on
/// bit i-1 of the vertex value (bit 0 is the rightmost tensor factor).
inline ComplexMatrix hypercube_pauli_shift(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_dimension, "hypercube dimension must be at least 1");
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  const Index dim = (Index{1} << n) * n;
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (int i = 1; i <= n; ++i) {
    ComplexMatrix vertex_op = ComplexMatrix::Identity(1, 1);
    for (int factor = n - 1; factor >= 0; --factor) {  // leftmost factor = most significant bit
      vertex_op = linalg::kron(vertex_op, factor == i - 1 ? x : id2);
    }
    ComplexMatrix proj = ComplexMatrix::Zero(n, n);
    proj(i - 1, i - 1) = 1.0;
    s += linalg::kron(vertex_op, proj);
  }
  return s;
}

enum class WalkKind { discrete, continuous };

struct WalkOperator {
  WalkKind kind = WalkKind::discrete;
  int num_vertices = 0;
  int degree = 1;  // coin dimension; 1 for continuous walks
  ComplexMatrix matrix;  // U for discrete, H for continuous
  std::optional<ColoredGraph> graph;
  std::optional<Coin> coin;

  Index dim() const { return matrix.rows(); }
};

/// U = S (I_N (x) C).
inline WalkOperator discrete_evolution(const ColoredGraph& g, const Coin& c) {
  if (c.dim != g.degree()) {
    throw Error(ErrorCode::dimension_mismatch, "coin dimension " + std::to_string(c.dim) +
                                                   " does not match graph degree " + std::to_string(g.degree()));
  }
  const ComplexMatrix s = shift_operator(g);
  const int d = g.degree();
  // S is a permutation, so S (I (x) C) just moves the rows of the block-diagonal coin.
  const Index dim = s.rows();
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int i = 1; i <= d; ++i) {
      const Index row = basis_index(g.neighbor(v, i), i, d);
      for (int k = 1; k <= d; ++k) u(row, basis_index(v, k, d)) = c.matrix(i - 1, k - 1);
    }
  }
  return WalkOperator{WalkKind::discrete, g.num_vertices(), d, std::move(u), g, c};
}

inline WalkOperator adjacency_hamiltonian(const SimpleGraph& g) {
  ComplexMatrix h = ComplexMatrix::Zero(g.num_vertices, g.num_vertices);
  for (const auto& [a, b] : g.edges) {
    h(a, b) = 1.0;
    h(b, a) = 1.0;
  }
  return WalkOperator{WalkKind::continuous, g.num_vertices, 1, std::move(h), std::nullopt, std::nullopt};
}

inline WalkOperator adjacency_hamiltonian(const ColoredGraph& g) {
  WalkOperator w = adjacency_hamiltonian(SimpleGraph::from_colored(g));
  w.graph = g;
  return w;
}

/// exp(i H t) through the Hermitian eigendecomposition of H.
inline ComplexMatrix propagator(const WalkOperator& h, double t) {
  if (h.kind != WalkKind::continuous) throw Error(ErrorCode::wrong_kind, "propagator needs a continuous walk");
  const auto spec = linalg::eig_hermitian(h.matrix);
  ComplexVector phases(spec.eigenvalues.size());
  for (Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, spec.eigenvalues(k).real() * t);
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

/// Matrix of |v, i> -> |pi(v), sigma(i)> on the walk space.
inline ComplexMatrix automorphism_matrix(const PermutationAutomorphism& a) {
  const int n = static_cast<int>(a.vertex_perm.size());
  const int d = static_cast<int>(a.color_perm.size());
  ComplexMatrix p = ComplexMatrix::Zero(static_cast<Index>(n) * d, static_cast<Index>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int i = 1; i <= d; ++i) p(basis_index(a.vertex_perm[v], a.color_perm[i - 1], d), basis_index(v, i, d)) = 1.0;
  return p;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace qwalk

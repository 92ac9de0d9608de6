#pragma once
// Degenerate eigenspaces of a walk operator and the trapped subspace: the span
// of all eigenvectors with zero amplitude on the final vertex. A walk started
// inside it never reaches the final vertex.

#include <cmath>
#include <numbers>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

inline constexpr double kDefaultClusterTol = 1e-8;

struct EigenCluster {
  double phase = 0.0;  // eigenphase in [0, 2pi) (discrete) or energy (continuous)
  Complex eigenvalue;  // e^{i phase} (discrete) or the energy (continuous)
  Index multiplicity = 0;
  ComplexMatrix basis;  // dim x multiplicity, orthonormal columns
};

struct EigenspaceClustering {
  std::vector<EigenCluster> clusters;
  WalkKind kind = WalkKind::discrete;
  int num_vertices = 0;
  int degree = 1;
  double tol = kDefaultClusterTol;
  /// Set when two distinct clusters lie within 10 * tol of each other.
  bool unstable = false;

  Index dim() const { return static_cast<Index>(num_vertices) * degree; }
  Index max_multiplicity() const {
    Index m = 0;
    for (const auto& c : clusters) m = std::max(m, c.multiplicity);
    return m;
  }
};

/// Greedy clustering of the sorted spectrum: a new cluster starts whenever a
/// value lies more than tol above the cluster's first value. Discrete spectra
/// wrap around at 2pi.
inline EigenspaceClustering cluster_eigenspaces(const WalkOperator& w, double tol = kDefaultClusterTol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::range, "cluster tolerance must be positive");
  const bool discrete = w.kind == WalkKind::discrete;
  const auto spec = discrete ? linalg::eig_unitary(w.matrix) : linalg::eig_hermitian(w.matrix);
  const Index n = spec.eigenvalues.size();

  std::vector<double> keys(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    keys[j] = discrete ? linalg::phase_of(spec.eigenvalues(j)) : spec.eigenvalues(j).real();
  }

  std::vector<std::vector<Index>> groups;
  for (Index j = 0; j < n; ++j) {
    if (groups.empty() || keys[j] - keys[groups.back().front()] > tol) groups.emplace_back();
    groups.back().push_back(j);
  }
  const double two_pi = 2.0 * std::numbers::pi;
  if (discrete && groups.size() > 1 &&
      keys[groups.front().front()] + two_pi - keys[groups.back().back()] <= tol) {
    auto tail = std::move(groups.back());
    groups.pop_back();
    groups.front().insert(groups.front().begin(), tail.begin(), tail.end());
  }

  EigenspaceClustering out;
  out.kind = w.kind;
  out.num_vertices = w.num_vertices;
  out.degree = w.degree;
  out.tol = tol;
  for (const auto& g : groups) {
    EigenCluster c;
    c.multiplicity = static_cast<Index>(g.size());
    c.basis.resize(n, c.multiplicity);
    Complex mean = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      c.basis.col(static_cast<Index>(k)) = spec.eigenvectors.col(g[k]);
      mean += spec.eigenvalues(g[k]);
    }
    mean /= static_cast<double>(g.size());
    if (discrete) {
      c.eigenvalue = mean / std::abs(mean);
      c.phase = linalg::phase_of(c.eigenvalue);
    } else {
      c.eigenvalue = Complex(mean.real(), 0.0);
      c.phase = mean.real();
    }
    out.clusters.push_back(std::move(c));
  }
  for (std::size_t k = 0; k + 1 < groups.size(); ++k) {
    if (keys[groups[k + 1].front()] - keys[groups[k].back()] <= 10.0 * tol) out.unstable = true;
  }
  if (discrete && groups.size() > 1 &&
      keys[groups.front().front()] + two_pi - keys[groups.back().back()] <= 10.0 * tol) {
    out.unstable = true;
  }
  return out;
}

struct TrappedContribution {
  double phase = 0.0;
  Index multiplicity = 0;
  Index trapped_dim = 0;
};

struct TrappedSubspace {
  ComplexMatrix projector;
  Index rank = 0;
  ComplexMatrix basis;  // dim x rank, orthonormal
  int final_vertex = 0;
  int degree = 1;
  WalkKind kind = WalkKind::discrete;
  std::vector<TrappedContribution> contributions;  // clusters with trapped_dim > 0
};

/// For every cluster with basis B, solve (rows of B on the final vertex) a = 0
/// and keep B a. Basis columns are unit vectors, so the null threshold is
/// absolute on the coefficient scale.
inline TrappedSubspace build_trapped_projector(const EigenspaceClustering& c, int final_vertex,
                                               double null_tol = linalg::kDefaultRankTol) {
  if (final_vertex < 0 || final_vertex >= c.num_vertices) {
    throw Error(ErrorCode::range, "final vertex " + std::to_string(final_vertex) + " out of range");
  }
  const Index dim = c.dim();
  const int d = c.degree;
  std::vector<ComplexMatrix> pieces;
  Index total = 0;
  TrappedSubspace out;
  out.final_vertex = final_vertex;
  out.degree = d;
  out.kind = c.kind;
  for (const auto& cl : c.clusters) {
    const ComplexMatrix block = cl.basis.middleRows(static_cast<Index>(final_vertex) * d, d);
    const ComplexMatrix coeffs = linalg::nullspace_absolute(block, null_tol);
    if (coeffs.cols() == 0) continue;
    pieces.push_back(cl.basis * coeffs);
    total += coeffs.cols();
    out.contributions.push_back({cl.phase, cl.multiplicity, coeffs.cols()});
  }
  ComplexMatrix all(dim, total);
  Index col = 0;
  for (const auto& p : pieces) {
    all.middleCols(col, p.cols()) = p;
    col += p.cols();
  }
  out.basis = linalg::orthonormal_basis(all, 1e-6);
  out.rank = out.basis.cols();
  out.projector = out.basis * out.basis.adjoint();
  return out;
}

struct CoinOverlapReport {
  int vertex = 0;
  ComplexMatrix matrix;  // d x d, <v,k| P |v,l>
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexMatrix eigenvectors;
  ComplexMatrix zero_eigenvectors;  // eigenvectors with eigenvalue <= zero_tol
};

/// C_v = Tr_vertices{ P (|v><v| (x) I) }: its quadratic form gives the trapped
/// mass of the coin state |v> (x) |alpha>.
inline CoinOverlapReport coin_overlap_matrix(const TrappedSubspace& p, int v, int d, double zero_tol = 1e-8) {
  if (p.kind != WalkKind::discrete) {
    throw Error(ErrorCode::wrong_kind, "continuous walks have no coin; use vertex_trap_overlap_continuous");
  }
  if (d != p.degree) throw Error(ErrorCode::dimension_mismatch, "degree does not match the trapped subspace");
  const Index dim = p.projector.rows();
  if (v < 0 || static_cast<Index>(v + 1) * d > dim) throw Error(ErrorCode::range, "vertex out of range");
  CoinOverlapReport r;
  r.vertex = v;
  r.matrix = p.projector.block(static_cast<Index>(v) * d, static_cast<Index>(v) * d, d, d);
  const ComplexMatrix herm = 0.5 * (r.matrix + r.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  r.eigenvalues = es.eigenvalues();
  r.eigenvectors = es.eigenvectors();
  Index zeros = 0;
  while (zeros < d && r.eigenvalues(zeros) <= zero_tol) ++zeros;
  r.zero_eigenvectors = r.eigenvectors.leftCols(zeros);
  return r;
}

enum class VertexTrapClass { all_infinite, partially_trapped, untrapped };

inline const char* to_string(VertexTrapClass c) {
  switch (c) {
    case VertexTrapClass::all_infinite: return "ALL-INFINITE";
    case VertexTrapClass::partially_trapped: return "PARTIALLY-TRAPPED";
    case VertexTrapClass::untrapped: return "UNTRAPPED";
  }
  return "?";
}

/// Positive definite C_v: every coin state at v overlaps the trapped subspace.
/// C_v = 0: no coin state at v does.
inline VertexTrapClass classify_vertex(const CoinOverlapReport& r) {
  const Index zeros = r.zero_eigenvectors.cols();
  if (zeros == 0) return VertexTrapClass::all_infinite;
  if (zeros == r.eigenvalues.size()) return VertexTrapClass::untrapped;
  return VertexTrapClass::partially_trapped;
}

/// <v| P |v> for a continuous walk.
inline double vertex_trap_overlap_continuous(const TrappedSubspace& p, int v) {
  if (v < 0 || v >= p.projector.rows() / p.degree) throw Error(ErrorCode::range, "vertex out of range");
  if (p.degree != 1) throw Error(ErrorCode::wrong_kind, "scalar overlap needs a coinless walk");
  return std::max(0.0, p.projector(v, v).real());
}

/// <psi| (I - P) |psi>: an upper bound on the total probability of ever
/// hitting the final vertex from psi.
inline double escape_mass(const TrappedSubspace& p, const ComplexVector& psi) {
  if (psi.size() != p.projector.rows()) throw Error(ErrorCode::dimension_mismatch, "state dimension mismatch");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorCode::normalization, "state norm is " + std::to_string(norm) + ", expected 1");
  }
  const double trapped = psi.dot(p.projector * psi).real();
  return std::clamp(1.0 - trapped, 0.0, 1.0);
}

}  // namespace qwalk

#pragma once
// Measured walks: after every step a projective measurement {P_f, Q_f} asks
// whether the walker sits on the final vertex. p(t) is the probability that
// the first "yes" happens at step t and the hitting time is sum_t t p(t).

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Largest walk dimension D for which the D^2 x D^2 superoperators are built.
inline constexpr Index kDefaultSuperoperatorGuard = 32;

struct MeasuredWalkSetup {
  ComplexMatrix evolution;  // U
  int num_vertices = 0;
  int degree = 1;
  int final_vertex = 0;
  ComplexMatrix final_projector;  // P_f = |x_f><x_f| (x) I_c
  ComplexMatrix complement;       // Q_f = I - P_f
  ComplexMatrix rho0;

  Index dim() const { return evolution.rows(); }

  static MeasuredWalkSetup make(const WalkOperator& w, int final_vertex, ComplexMatrix rho0) {
    if (w.kind != WalkKind::discrete) {
      throw Error(ErrorCode::wrong_kind, "measured hitting times are defined for discrete walks only");
    }
    if (w.graph && !w.graph->connected()) {
      throw Error(ErrorCode::connectivity, "hitting times need a connected graph");
    }
    if (final_vertex < 0 || final_vertex >= w.num_vertices) {
      throw Error(ErrorCode::range, "final vertex " + std::to_string(final_vertex) + " out of range");
    }
    const Index dim = w.dim();
    if (rho0.rows() != dim || rho0.cols() != dim) {
      throw Error(ErrorCode::dimension_mismatch, "initial density operator has the wrong size");
    }
    if (linalg::hermitian_defect(rho0) > 1e-10) {
      throw Error(ErrorCode::symmetry_violation, "initial density operator is not Hermitian");
    }
    const Complex tr = rho0.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10) {
      std::ostringstream os;
      os << "initial density operator has trace " << tr;
      throw Error(ErrorCode::normalization, os.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho0 + rho0.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw Error(ErrorCode::normalization, "initial density operator is not positive semidefinite");
    }
    MeasuredWalkSetup s;
    s.evolution = w.matrix;
    s.num_vertices = w.num_vertices;
    s.degree = w.degree;
    s.final_vertex = final_vertex;
    s.final_projector = ComplexMatrix::Zero(dim, dim);
    for (int i = 1; i <= w.degree; ++i) {
      const Index k = basis_index(final_vertex, i, w.degree);
      s.final_projector(k, k) = 1.0;
    }
    s.complement = ComplexMatrix::Identity(dim, dim) - s.final_projector;
    s.rho0 = std::move(rho0);
    return s;
  }

  static MeasuredWalkSetup make_pure(const WalkOperator& w, int final_vertex, const ComplexVector& psi) {
    if (psi.size() != w.dim()) throw Error(ErrorCode::dimension_mismatch, "initial state has the wrong size");
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
      throw Error(ErrorCode::normalization, "initial state is not normalized");
    }
    return make(w, final_vertex, psi * psi.adjoint());
  }
};

/// |v> (x) |alpha>, with alpha normalized.
inline ComplexVector localized_state(int num_vertices, int degree, int vertex, const ComplexVector& coin_state) {
  if (coin_state.size() != degree) throw Error(ErrorCode::dimension_mismatch, "coin state has the wrong size");
  if (vertex < 0 || vertex >= num_vertices) throw Error(ErrorCode::range, "vertex out of range");
  const double norm = coin_state.norm();
  if (norm == 0.0) throw Error(ErrorCode::normalization, "coin state is zero");
  ComplexVector psi = ComplexVector::Zero(static_cast<Index>(num_vertices) * degree);
  psi.segment(static_cast<Index>(vertex) * degree, degree) = coin_state / norm;
  return psi;
}

inline ComplexVector uniform_coin_state(int degree) {
  return ComplexVector::Constant(degree, Complex(1.0 / std::sqrt(static_cast<double>(degree)), 0.0));
}

/// p(t) = Tr{P_f U [Q_f U]^{t-1} rho0 [U^dagger Q_f]^{t-1} U^dagger P_f},
/// evaluated by iterating rho <- Q_f U rho U^dagger Q_f.
inline double first_hit_probability(const MeasuredWalkSetup& s, int t) {
  if (t < 1) throw Error(ErrorCode::range, "time step must be at least 1");
  const ComplexMatrix qu = s.complement * s.evolution;
  ComplexMatrix rho = s.rho0;
  for (int k = 1; k < t; ++k) rho = qu * rho * qu.adjoint();
  const ComplexMatrix pu = s.final_projector * s.evolution;
  return (pu * rho * pu.adjoint()).trace().real();
}

struct HitSeries {
  std::vector<double> p;         // p[t-1] = p(t)
  std::vector<double> survival;  // survival[t-1] = Tr{N^t rho0}
};

/// p(1..T) and the surviving norm after each step, in one pass.
inline HitSeries hit_probability_series(const MeasuredWalkSetup& s, int max_t) {
  if (max_t < 1) throw Error(ErrorCode::range, "T must be at least 1");
  const ComplexMatrix qu = s.complement * s.evolution;
  const ComplexMatrix pu = s.final_projector * s.evolution;
  HitSeries out;
  out.p.reserve(max_t);
  out.survival.reserve(max_t);
  ComplexMatrix rho = s.rho0;
  for (int t = 1; t <= max_t; ++t) {
    out.p.push_back((pu * rho * pu.adjoint()).trace().real());
    rho = (qu * rho * qu.adjoint()).eval();
    out.survival.push_back(rho.trace().real());
  }
  return out;
}

/// Same series for a pure initial state, propagating the state vector only.
inline HitSeries hit_probability_series_pure(const WalkOperator& w, int final_vertex, const ComplexVector& psi,
                                             int max_t) {
  if (max_t < 1) throw Error(ErrorCode::range, "T must be at least 1");
  if (w.kind != WalkKind::discrete) throw Error(ErrorCode::wrong_kind, "discrete walk required");
  const Index off = static_cast<Index>(final_vertex) * w.degree;
  HitSeries out;
  ComplexVector state = psi;
  for (int t = 1; t <= max_t; ++t) {
    state = (w.matrix * state).eval();
    out.p.push_back(state.segment(off, w.degree).squaredNorm());
    state.segment(off, w.degree).setZero();
    out.survival.push_back(state.squaredNorm());
  }
  return out;
}

struct Superoperators {
  ComplexMatrix n;  // (Q_f U) (x) (Q_f U)^*
  ComplexMatrix y;  // (P_f U) (x) (P_f U)^*
};

inline void check_superoperator_guard(Index dim, Index max_dim) {
  if (dim > max_dim) {
    throw Error(ErrorCode::resource, "walk dimension " + std::to_string(dim) + " exceeds the superoperator guard " +
                                         std::to_string(max_dim) + "; use the truncated method");
  }
}

/// Superoperator matrices acting on row-stacked density operators.
inline Superoperators superoperator_matrices(const MeasuredWalkSetup& s,
                                             Index max_dim = kDefaultSuperoperatorGuard) {
  check_superoperator_guard(s.dim(), max_dim);
  const ComplexMatrix qu = s.complement * s.evolution;
  const ComplexMatrix pu = s.final_projector * s.evolution;
  return Superoperators{linalg::kron(qu, qu.conjugate()), linalg::kron(pu, pu.conjugate())};
}

/// I^v . (Y N^{t-1} rho^v).
inline double vectorized_first_hit_probability(const Superoperators& ops, const ComplexMatrix& rho0, int t) {
  if (t < 1) throw Error(ErrorCode::range, "time step must be at least 1");
  ComplexVector x = linalg::vectorize(rho0);
  for (int k = 1; k < t; ++k) x = (ops.n * x).eval();
  const ComplexVector iv = linalg::vectorize(ComplexMatrix::Identity(rho0.rows(), rho0.cols()));
  return iv.dot(ops.y * x).real();
}

enum class Classification { finite, infinite, inconclusive };
enum class Method { closed_form, truncated, both };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::finite: return "FINITE";
    case Classification::infinite: return "INFINITE";
    case Classification::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "CLOSED_FORM";
    case Method::truncated: return "TRUNCATED";
    case Method::both: return "BOTH";
  }
  return "?";
}

struct HittingResult {
  Classification classification = Classification::inconclusive;
  std::optional<double> tau;
  /// Summed (truncated) or closed-form total probability of ever hitting.
  std::optional<double> total_hit_probability;
  /// Tr{(I - P) rho0}: upper bound on the total hitting probability.
  std::optional<double> escape_mass;
  Method method = Method::closed_form;
  std::optional<int> truncation_T;
  /// Imaginary residue of the closed form.
  std::optional<double> residual;
  /// Tr{N^T rho0} for truncated runs.
  std::optional<double> survival;
  /// ||P rho0||, the infinite-hitting certificate.
  std::optional<double> trapped_overlap;
};

inline double trace_outside(const TrappedSubspace& trapped, const ComplexMatrix& rho) {
  return std::clamp((rho.trace() - (trapped.projector * rho).trace()).real(), 0.0, 1.0);
}

/// tau = I^v . (Y pinv(I - N)^2 rho^v). Initial states overlapping the
/// trapped subspace beyond tol are classified INFINITE without building the
/// superoperators.
inline HittingResult hitting_time_closed_form(const MeasuredWalkSetup& s, const TrappedSubspace& trapped,
                                              double tol = linalg::kDefaultRankTol,
                                              Index max_dim = kDefaultSuperoperatorGuard) {
  if (trapped.projector.rows() != s.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "trapped subspace dimension does not match the walk");
  }
  HittingResult r;
  r.method = Method::closed_form;
  const double overlap = (trapped.projector * s.rho0).norm();
  r.trapped_overlap = overlap;
  r.escape_mass = trace_outside(trapped, s.rho0);
  const Index dim = s.dim();
  const ComplexVector iv = linalg::vectorize(ComplexMatrix::Identity(dim, dim));

  if (overlap > tol) {
    r.classification = Classification::infinite;
    if (dim <= max_dim) {
      // Only the part of rho0 outside P can ever reach the final vertex.
      const ComplexMatrix outside = ComplexMatrix::Identity(dim, dim) - trapped.projector;
      const ComplexMatrix rho_out = outside * s.rho0 * outside;
      const auto ops = superoperator_matrices(s, max_dim);
      const ComplexMatrix a = ComplexMatrix::Identity(ops.n.rows(), ops.n.cols()) - ops.n;
      const ComplexMatrix ap = linalg::pseudo_inverse(a, tol);
      r.total_hit_probability = iv.dot(ops.y * (ap * linalg::vectorize(rho_out))).real();
    }
    return r;
  }

  const auto ops = superoperator_matrices(s, max_dim);
  const ComplexMatrix a = ComplexMatrix::Identity(ops.n.rows(), ops.n.cols()) - ops.n;
  const ComplexMatrix ap = linalg::pseudo_inverse(a, tol);
  const ComplexVector once = ap * linalg::vectorize(s.rho0);
  const ComplexVector twice = ap * once;
  const Complex tau = iv.dot(ops.y * twice);
  r.tau = tau.real();
  r.residual = std::abs(tau.imag());
  r.total_hit_probability = iv.dot(ops.y * once).real();
  r.classification = Classification::finite;
  return r;
}

inline constexpr double kDefaultTailTol = 1e-10;

/// tau_T = sum_{t <= T} t p(t); FINITE once the surviving norm is below tail_tol.
inline HittingResult summarize_series(const HitSeries& series, double tail_tol = kDefaultTailTol) {
  if (series.p.empty()) throw Error(ErrorCode::range, "empty hit series");
  HittingResult r;
  r.method = Method::truncated;
  r.truncation_T = static_cast<int>(series.p.size());
  double tau = 0.0, total = 0.0;
  for (std::size_t k = 0; k < series.p.size(); ++k) {
    tau += static_cast<double>(k + 1) * series.p[k];
    total += series.p[k];
  }
  r.tau = tau;
  r.total_hit_probability = total;
  r.survival = series.survival.back();
  r.classification = *r.survival <= tail_tol ? Classification::finite : Classification::inconclusive;
  return r;
}

inline HittingResult hitting_time_truncated(const MeasuredWalkSetup& s, int max_t, double tail_tol = kDefaultTailTol) {
  return summarize_series(hit_probability_series(s, max_t), tail_tol);
}

inline double total_hitting_probability(const MeasuredWalkSetup& s, int max_t) {
  const auto series = hit_probability_series(s, max_t);
  double total = 0.0;
  for (double p : series.p) total += p;
  return total;
}

/// Expected first-passage time of the simple random walk: h(final) = 0 and
/// h(v) = 1 + (1/d) sum_i h(v(i)).
inline double classical_hitting_time(const ColoredGraph& g, int start, int final_vertex) {
  if (!g.connected()) throw Error(ErrorCode::connectivity, "classical hitting time needs a connected graph");
  const int n = g.num_vertices();
  if (start < 0 || start >= n || final_vertex < 0 || final_vertex >= n) {
    throw Error(ErrorCode::range, "vertex out of range");
  }
  if (start == final_vertex) return 0.0;
  std::vector<int> slot(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (v != final_vertex) slot[v] = m++;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  const double w = 1.0 / g.degree();
  for (int v = 0; v < n; ++v) {
    if (v == final_vertex) continue;
    for (int i = 1; i <= g.degree(); ++i) {
      const int u = g.neighbor(v, i);
      if (u != final_vertex) a(slot[v], slot[u]) -= w;
    }
  }
  const Eigen::VectorXd h = a.partialPivLu().solve(b);
  return h(slot[start]);
}

}  // namespace qwalk

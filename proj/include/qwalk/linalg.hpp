#pragma once
// Dense complex kernels shared by every walk analysis. Eigen supplies the
// Hermitian eigensolver and the SVD; the unitary eigendecomposition is built on
// top of them by simultaneous diagonalization of the commuting Hermitian pair
// (U + U^dagger)/2 and (U - U^dagger)/(2i).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace linalg {

/// Default rank / null-space tolerance, relative to the largest singular value.
inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

struct SpectralResult {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;  // orthonormal columns
};

inline double frobenius(const ComplexMatrix& a) { return a.norm(); }

inline double hermitian_defect(const ComplexMatrix& a) {
  return (a - a.adjoint()).norm();
}

inline double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

/// Phase of a unit-modulus number mapped into [0, 2pi).
inline double phase_of(Complex z) {
  double p = std::arg(z);
  if (p < 0.0) p += 2.0 * std::numbers::pi;
  if (p >= 2.0 * std::numbers::pi - 1e-14) p = 0.0;
  return p;
}

inline SpectralResult eig_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "eig_hermitian needs a square matrix");
  }
  const double defect = hermitian_defect(a);
  if (defect > kHermitianTol * frobenius(a)) {
    std::ostringstream os;
    os << "matrix is not Hermitian, ||A - A^dagger|| = " << defect;
    throw Error(ErrorCode::symmetry_violation, os.str());
  }
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  SpectralResult out;
  out.eigenvalues = es.eigenvalues().cast<Complex>();
  out.eigenvectors = es.eigenvectors();
  return out;
}

/// Eigendecomposition of a unitary. Eigenvalues are sorted by phase in
/// [0, 2pi); eigenvectors are orthonormal even inside degenerate eigenspaces.
inline SpectralResult eig_unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "eig_unitary needs a square matrix");
  }
  const double defect = unitarity_defect(u);
  if (defect > kUnitaryTol) {
    std::ostringstream os;
    os << "matrix is not unitary, ||U^dagger U - I|| = " << defect;
    throw Error(ErrorCode::unitarity_violation, os.str());
  }
  const Index n = u.rows();
  const ComplexMatrix re_part = 0.5 * (u + u.adjoint());
  const ComplexMatrix im_part = (u - u.adjoint()) / Complex(0.0, 2.0);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es_re(re_part);
  ComplexMatrix vecs = es_re.eigenvectors();
  const Eigen::VectorXd& cosines = es_re.eigenvalues();

  // Blocks of (numerically) equal real part mix +theta and -theta; the
  // imaginary part separates them.
  constexpr double block_tol = 1e-9;
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && cosines(stop) - cosines(start) <= block_tol) ++stop;
    const Index k = stop - start;
    if (k > 1) {
      const ComplexMatrix basis = vecs.middleCols(start, k);
      ComplexMatrix restricted = basis.adjoint() * im_part * basis;
      restricted = 0.5 * (restricted + restricted.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es_im(restricted);
      vecs.middleCols(start, k) = basis * es_im.eigenvectors();
    }
    start = stop;
  }

  std::vector<Complex> values(static_cast<std::size_t>(n));
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    Complex rq = vecs.col(j).dot(u * vecs.col(j));  // v^dagger U v
    rq /= std::abs(rq);
    values[j] = rq;
    phases[j] = phase_of(rq);
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return phases[a] < phases[b]; });

  SpectralResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = values[order[j]];
    out.eigenvectors.col(j) = vecs.col(order[j]);
  }
  return out;
}

namespace detail {

inline Eigen::BDCSVD<ComplexMatrix> full_svd(const ComplexMatrix& a) {
  return Eigen::BDCSVD<ComplexMatrix>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

inline ComplexMatrix null_columns(const Eigen::BDCSVD<ComplexMatrix>& svd, Index cols,
                                  double threshold) {
  const Eigen::VectorXd& s = svd.singularValues();
  Index rank = 0;
  for (Index j = 0; j < s.size(); ++j) {
    if (s(j) > threshold) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

}  // namespace detail

/// Orthonormal basis of the right singular vectors whose singular value does
/// not exceed the absolute threshold.
inline ComplexMatrix nullspace_absolute(const ComplexMatrix& a, double threshold) {
  const Index cols = a.cols();
  if (cols == 0) return ComplexMatrix(0, 0);
  if (a.rows() == 0) return ComplexMatrix::Identity(cols, cols);
  return detail::null_columns(detail::full_svd(a), cols, threshold);
}

/// Null space at a tolerance relative to the largest singular value.
inline ComplexMatrix nullspace(const ComplexMatrix& a, double tol = kDefaultRankTol) {
  if (tol < 0.0) throw Error(ErrorCode::range, "tolerance must be nonnegative");
  const Index cols = a.cols();
  if (cols == 0) return ComplexMatrix(0, 0);
  if (a.rows() == 0) return ComplexMatrix::Identity(cols, cols);
  const auto svd = detail::full_svd(a);
  const double smax = svd.singularValues()(0);
  return detail::null_columns(svd, cols, tol * smax);
}

inline Index rank(const ComplexMatrix& a, double tol = kDefaultRankTol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index j = 0; j < s.size(); ++j) {
    if (s(j) > tol * s(0)) ++r;
  }
  return r;
}

/// Moore-Penrose pseudo-inverse; singular values at or below tol * sigma_max
/// are treated as zero.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double tol = kDefaultRankTol) {
  if (tol < 0.0) throw Error(ErrorCode::range, "tolerance must be nonnegative");
  if (a.size() == 0) return ComplexMatrix(a.cols(), a.rows());
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = s.size() > 0 ? tol * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Index j = 0; j < s.size(); ++j) {
    if (s(j) > cut && s(j) > 0.0) inv(j) = 1.0 / s(j);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// Orthonormal basis for the column span of m, dropping directions whose
/// singular value is at or below the absolute threshold.
inline ComplexMatrix orthonormal_basis(const ComplexMatrix& m, double threshold) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Index r = 0;
  for (Index j = 0; j < s.size(); ++j) {
    if (s(j) > threshold) ++r;
  }
  return svd.matrixU().leftCols(r);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Row-stacking vectorization: entry (r, c) lands at index r * cols + c.
inline ComplexVector vectorize(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) v(r * a.cols() + c) = a(r, c);
  }
  return v;
}

inline ComplexMatrix devectorize(const ComplexVector& v, Index rows, Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols) {
    throw Error(ErrorCode::dimension_mismatch, "devectorize: length does not match rows*cols");
  }
  ComplexMatrix a(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) a(r, c) = v(r * cols + c);
  }
  return a;
}

}  // namespace linalg
}  // namespace qwalk

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "revca/error.hpp"

namespace revca {

using Complex = std::complex<double>;

// Square complex matrix over the ontological basis.
using DenseOperator = Eigen::MatrixXcd;

template <class Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Absolute tolerance for approximate predicates (diagonality, unitarity,
// branch snapping). Exact 0/1 checks do not go through this.
struct ToleranceContext {
  double abs_tol = 1e-9;

  static ToleranceContext for_dim(std::size_t dim) { return {dim <= 256 ? 1e-9 : 1e-7}; }
};

template <class M>
M commutator(const M& a, const M& b) {
  return a * b - b * a;
}

template <class Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

inline void require_square(const DenseOperator& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + " must be square");
}

inline void require_same_dim(const DenseOperator& a, const DenseOperator& b) {
  require_square(a, "operator");
  require_square(b, "operator");
  if (a.rows() != b.rows())
    throw Error(ErrorCode::dimension_mismatch, "operator dimensions differ: " + std::to_string(a.rows()) +
                                                   " vs " + std::to_string(b.rows()));
}

inline bool is_hermitian(const DenseOperator& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const DenseOperator& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - DenseOperator::Identity(m.rows(), m.cols())) <= tol;
}

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  DenseOperator vectors;   // columns
};

inline HermitianEigen hermitian_eigen(const DenseOperator& h) {
  require_square(h, "hermitian operator");
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(h);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::invariant_failed, "hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Eigen-decomposition of a normal (here: unitary) matrix via the complex Schur
// form, whose triangular factor is diagonal up to rounding for normal input.
// Unlike an eigenvector solver this yields an orthonormal basis even inside
// degenerate eigenspaces.
struct NormalEigen {
  Eigen::VectorXcd values;
  DenseOperator vectors;  // unitary
};

inline NormalEigen normal_eigen(const DenseOperator& m, double tol) {
  require_square(m, "normal operator");
  Eigen::ComplexSchur<DenseOperator> schur(m);
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::invariant_failed, "Schur decomposition failed");
  const DenseOperator& t = schur.matrixT();
  const double off = max_abs(DenseOperator(t.triangularView<Eigen::StrictlyUpper>()));
  if (off > tol * std::max(1.0, max_abs(t)))
    throw Error(ErrorCode::non_unitary, "matrix is not normal (Schur off-diagonal " + std::to_string(off) + ")");
  return {t.diagonal(), schur.matrixU()};
}

// e^{-i t H} for Hermitian H.
inline DenseOperator exp_minus_i(const HermitianEigen& eig, double t) {
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, -t * eig.values[k]);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

inline DenseOperator exp_minus_i(const DenseOperator& h, double t = 1.0) {
  return exp_minus_i(hermitian_eigen(h), t);
}

// Residual max_k |M v_k - lambda_k v_k| of an eigen-decomposition.
inline double eigen_residual(const DenseOperator& m, const Eigen::VectorXcd& values, const DenseOperator& vectors) {
  return max_abs(DenseOperator(m * vectors - vectors * values.asDiagonal()));
}

// exp(M) - I by Taylor series. Intended for small ||M|| where forming exp(M)
// and subtracting I would lose the leading digits.
template <class Real>
ComplexMatrix<Real> expm1_series(const ComplexMatrix<Real>& m) {
  using M = ComplexMatrix<Real>;
  const Eigen::Index n = m.rows();
  M sum = M::Zero(n, n);
  M term = M::Identity(n, n);
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int k = 1; k < 200; ++k) {
    term = (term * m) / Real(k);
    sum += term;
    if (max_abs(term) <= eps * max_abs(sum) * Real(1e-2)) break;
  }
  return sum;
}

// log(I + X) by the Mercator series; requires ||X|| < 1 (callers keep it well
// below that).
template <class Real>
ComplexMatrix<Real> log1p_series(const ComplexMatrix<Real>& x) {
  using M = ComplexMatrix<Real>;
  const Eigen::Index n = x.rows();
  M sum = M::Zero(n, n);
  M power = M::Identity(n, n);
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int k = 1; k < 2000; ++k) {
    power = power * x;
    const M term = power / Real(k);
    if (k % 2 == 1)
      sum += term;
    else
      sum -= term;
    if (max_abs(term) <= eps * max_abs(sum) * Real(1e-2)) break;
  }
  return sum;
}

inline double wrap_to_pi(double angle) {
  double a = std::remainder(angle, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

// Principal logarithm of a unitary matrix: eigenvalues i*arg(lambda) with arg in
// (-pi, pi].
inline DenseOperator principal_log_unitary(const DenseOperator& u, double tol) {
  const NormalEigen eig = normal_eigen(u, tol);
  Eigen::VectorXcd logs(eig.values.size());
  for (Eigen::Index k = 0; k < logs.size(); ++k)
    logs[k] = Complex(std::log(std::abs(eig.values[k])), std::arg(eig.values[k]));
  return eig.vectors * logs.asDiagonal() * eig.vectors.adjoint();
}

template <class Real, class Derived>
ComplexMatrix<Real> cast_to(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<std::complex<Real>>();
}

}  // namespace revca

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "revca/error.hpp"
#include "revca/linalg.hpp"

namespace revca {

template <class M>
void check_bch_args(const M& p, const M& q) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows())
    throw Error(ErrorCode::dimension_mismatch, "BCH arguments must be square matrices of equal dimension");
}

inline void check_order(int order, int max_order = 4) {
  if (order < 1 || order > max_order)
    throw Error(ErrorCode::invalid_order,
                "truncation order " + std::to_string(order) + " outside 1.." + std::to_string(max_order));
}

// log(e^P e^Q) truncated after the terms of total degree `order`:
//   P + Q + [P,Q]/2 + ([P,[P,Q]] + [[P,Q],Q])/12 + [[P,[P,Q]],Q]/24.
template <class M>
M bch_truncation(const M& p, const M& q, int order) {
  check_bch_args(p, q);
  check_order(order);
  using Real = typename Eigen::NumTraits<typename M::Scalar>::Real;
  M r = p + q;
  if (order < 2) return r;
  const M pq = commutator(p, q);
  r += pq / Real(2);
  if (order < 3) return r;
  const M ppq = commutator(p, pq);
  r += (ppq + commutator(pq, q)) / Real(12);
  if (order < 4) return r;
  r += commutator(ppq, q) / Real(24);
  return r;
}

// exp(M) by scaling and squaring around the Taylor series.
template <class Real>
ComplexMatrix<Real> expm_series(const ComplexMatrix<Real>& m) {
  using Mat = ComplexMatrix<Real>;
  const Real norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > Real(0.5)) squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm) / 0.5)));
  Mat e = expm1_series<Real>(m / std::ldexp(Real(1), squarings));
  e += Mat::Identity(m.rows(), m.cols());
  for (int s = 0; s < squarings; ++s) e = e * e;
  return e;
}

// log(e^P e^Q) for anti-Hermitian P, Q (so the product is unitary).
//
// Near the identity the product is formed as I + X with X assembled from
// expm1 terms and the log is taken by series, which keeps full relative
// precision as P, Q -> 0. Otherwise the principal branch is taken from a Schur
// decomposition in double precision.
template <class Real>
ComplexMatrix<Real> log_of_product(const ComplexMatrix<Real>& p, const ComplexMatrix<Real>& q) {
  check_bch_args(p, q);
  using Mat = ComplexMatrix<Real>;
  const Real np = p.cwiseAbs().rowwise().sum().maxCoeff();
  const Real nq = q.cwiseAbs().rowwise().sum().maxCoeff();
  if (np <= Real(0.5) && nq <= Real(0.5)) {
    const Mat e1 = expm1_series<Real>(p);
    const Mat e2 = expm1_series<Real>(q);
    const Mat x = e1 + e2 + e1 * e2;
    if (x.norm() <= Real(0.5)) return log1p_series<Real>(x);
  }
  const DenseOperator u = (expm_series<Real>(p) * expm_series<Real>(q)).template cast<Complex>();
  return principal_log_unitary(u, 1e-8).template cast<std::complex<Real>>();
}

// Conjugacy-class reduction of the BCH exponent. With S = (P+Q)/2 and
// D = (P-Q)/2 the generator F = -D/2 + [S,[S,D]]/24 satisfies
//   e^F R e^{-F} = 2S - [D,[S,D]]/12 + O(degree 5),
// which is odd in S and even in D. Orders 1-2 keep only the leading terms
// (remainder of degree 3); orders 3-4 keep the cubic terms as well.
template <class M>
struct SDReduction {
  M F;
  M R_reduced;
};

template <class M>
SDReduction<M> sd_reduction(const M& p, const M& q, int order) {
  check_bch_args(p, q);
  check_order(order);
  using Real = typename Eigen::NumTraits<typename M::Scalar>::Real;
  const M s = (p + q) / Real(2);
  const M d = (p - q) / Real(2);
  SDReduction<M> out{-d / Real(2), Real(2) * s};
  if (order >= 3) {
    const M sd = commutator(s, d);
    out.F += commutator(s, sd) / Real(24);
    out.R_reduced -= commutator(d, sd) / Real(12);
  }
  return out;
}

// || e^F R e^{-F} - R_reduced ||_F with R = log(e^P e^Q), evaluated in the
// requested precision.
template <class Real>
Real sd_remainder(const ComplexMatrix<Real>& p, const ComplexMatrix<Real>& q, int order) {
  const auto red = sd_reduction(p, q, order);
  const ComplexMatrix<Real> r = log_of_product<Real>(p, q);
  const ComplexMatrix<Real> ef = expm_series<Real>(red.F);
  const ComplexMatrix<Real> emf = expm_series<Real>(ComplexMatrix<Real>(-red.F));
  return (ef * r * emf - red.R_reduced).norm();
}

}  // namespace revca

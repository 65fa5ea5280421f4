#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "revca/bch.hpp"
#include "revca/error.hpp"
#include "revca/linalg.hpp"

namespace revca {

// Eigenphases of U(eps) = e^{eps P} e^{eps Q} continued from eps = 0, i.e. the
// eigenvalues of R(eps)/i along the analytic branch that starts at R(0) = 0.
//
// Tracks are advanced with a first-order predictor (the phase velocity of an
// eigenvector v is <v| -i(P+Q) |v>) and then snapped to the nearest computed
// eigenphase by a cyclic order-preserving assignment. The predictor lets
// tracks from different symmetry sectors pass through each other instead of
// bouncing off.
class PhaseContinuation {
 public:
  // P and Q must be anti-Hermitian. `max_phase_step` bounds the phase any track
  // may move per integration step.
  PhaseContinuation(const DenseOperator& p, const DenseOperator& q, double max_phase_step = 0.1)
      : max_phase_step_(max_phase_step) {
    check_bch_args(p, q);
    const Complex i_unit(0.0, 1.0);
    // e^{eps P} = V_p diag(e^{-i eps lambda}) V_p^H with i P = V_p diag(lambda) V_p^H.
    const DenseOperator hp = i_unit * p, hq = i_unit * q;
    const auto tol = ToleranceContext::for_dim(static_cast<std::size_t>(p.rows()));
    if (!is_hermitian(hp, tol.abs_tol * std::max(1.0, max_abs(hp))) ||
        !is_hermitian(hq, tol.abs_tol * std::max(1.0, max_abs(hq))))
      throw Error(ErrorCode::non_unitary, "phase continuation needs anti-Hermitian generators");
    const HermitianEigen ep = hermitian_eigen((hp + hp.adjoint()) / 2.0);
    const HermitianEigen eq = hermitian_eigen((hq + hq.adjoint()) / 2.0);
    lp_ = ep.values;
    lq_ = eq.values;
    // Work in the eigenbasis of P: U~ = D_p(eps) M D_q(eps) M^H with M = V_p^H V_q.
    m_ = ep.vectors.adjoint() * eq.vectors;
    velocity_op_ = ep.vectors.adjoint() * (-(hp + hq)) * ep.vectors;
    velocity_op_ = (velocity_op_ + velocity_op_.adjoint()) / 2.0;
    const double vmax = lp_.cwiseAbs().maxCoeff() + lq_.cwiseAbs().maxCoeff();
    step_ = vmax > 0 ? max_phase_step_ / vmax : 1.0;
  }

  // Continued eigenphases at each requested eps (any order, eps >= 0).
  std::vector<Eigen::VectorXd> phases_at(std::span<const double> eps_values) const {
    std::vector<std::size_t> idx(eps_values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) { return eps_values[l] < eps_values[r]; });

    const Eigen::Index n = m_.rows();
    std::vector<Eigen::VectorXd> out(eps_values.size(), Eigen::VectorXd::Zero(n));
    Eigen::VectorXd phase = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(n);
    double eps = 0.0;
    bool started = false;
    for (std::size_t k : idx) {
      const double target = eps_values[k];
      if (target < 0) throw Error(ErrorCode::invalid_config, "continuation needs eps >= 0");
      while (eps < target) {
        const double h = std::min(step_, target - eps);
        eps += h;
        const auto [theta, vel] = eigen_at(eps);
        if (!started) {
          // First step from U(0) = I: every phase is still far below pi.
          phase = theta;
          for (Eigen::Index j = 0; j < n; ++j) phase[j] = wrap_to_pi(phase[j]);
          velocity = vel;
          started = true;
          continue;
        }
        assign(phase, velocity, theta, vel, h);
      }
      out[k] = phase;
    }
    return out;
  }

  double step() const { return step_; }

 private:
  std::pair<Eigen::VectorXd, Eigen::VectorXd> eigen_at(double eps) const {
    const Eigen::Index n = m_.rows();
    Eigen::VectorXcd dp(n), dq(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      dp[j] = std::polar(1.0, -eps * lp_[j]);
      dq[j] = std::polar(1.0, -eps * lq_[j]);
    }
    const DenseOperator u = dp.asDiagonal() * (m_ * dq.asDiagonal() * m_.adjoint());
    Eigen::ComplexSchur<DenseOperator> schur(u);
    const DenseOperator& z = schur.matrixU();
    const DenseOperator hz = velocity_op_ * z;
    Eigen::VectorXd theta(n), vel(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      theta[j] = std::arg(schur.matrixT()(j, j));
      vel[j] = z.col(j).dot(hz.col(j)).real();
    }
    return {theta, vel};
  }

  // Match predicted track positions to the new eigenphases by the cyclic
  // rotation of the two angularly sorted lists with the least total motion.
  static void assign(Eigen::VectorXd& phase, Eigen::VectorXd& velocity, const Eigen::VectorXd& theta,
                     const Eigen::VectorXd& vel, double h) {
    const Eigen::Index n = phase.size();
    Eigen::VectorXd pred = phase + velocity * h;
    auto angle = [](double x) {
      double a = std::fmod(x, kTwoPi);
      return a < 0 ? a + kTwoPi : a;
    };
    std::vector<Eigen::Index> op(static_cast<std::size_t>(n)), on(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) op[static_cast<std::size_t>(j)] = on[static_cast<std::size_t>(j)] = j;
    std::sort(op.begin(), op.end(), [&](Eigen::Index l, Eigen::Index r) { return angle(pred[l]) < angle(pred[r]); });
    std::sort(on.begin(), on.end(), [&](Eigen::Index l, Eigen::Index r) { return angle(theta[l]) < angle(theta[r]); });
    std::size_t best_shift = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t shift = 0; shift < op.size(); ++shift) {
      double cost = 0.0;
      for (std::size_t j = 0; j < op.size() && cost < best_cost; ++j)
        cost += std::abs(wrap_to_pi(theta[on[(j + shift) % on.size()]] - pred[op[j]]));
      if (cost < best_cost) {
        best_cost = cost;
        best_shift = shift;
      }
    }
    for (std::size_t j = 0; j < op.size(); ++j) {
      const Eigen::Index track = op[j];
      const Eigen::Index src = on[(j + best_shift) % on.size()];
      phase[track] = pred[track] + wrap_to_pi(theta[src] - pred[track]);
      velocity[track] = vel[src];
    }
  }

  double max_phase_step_;
  double step_ = 1.0;
  Eigen::VectorXd lp_, lq_;
  DenseOperator m_;
  DenseOperator velocity_op_;
};

struct ConvergencePoint {
  double eps = 0.0;
  std::vector<double> truncation_errors;  // Frobenius norm, one per requested order
  double principal_spread = 0.0;          // spread of the principal log's R/i (always < 2 pi)
  double continued_spread = 0.0;          // spread of the continued eigenphases of R/i
  bool divergent = false;                 // continued_spread >= 2 pi
};

struct ConvergenceReport {
  std::vector<int> orders;
  std::vector<ConvergencePoint> points;  // in the order of the requested grid
  std::optional<double> divergence_onset;
};

// Truncation error of R_k(eps) against log(e^{eps P} e^{eps Q}) on a grid of
// eps, plus the continued eigenphase spread that decides convergence. P and Q
// must be anti-Hermitian.
inline ConvergenceReport convergence_probe(const DenseOperator& p, const DenseOperator& q, std::span<const double> eps_grid,
                                           std::span<const int> orders, double max_phase_step = 0.1) {
  check_bch_args(p, q);
  for (int k : orders) check_order(k);
  using Wide = long double;
  const ComplexMatrix<Wide> pw = cast_to<Wide>(p), qw = cast_to<Wide>(q);

  const PhaseContinuation continuation(p, q, max_phase_step);
  const auto continued = continuation.phases_at(eps_grid);

  ConvergenceReport report;
  report.orders.assign(orders.begin(), orders.end());
  for (std::size_t g = 0; g < eps_grid.size(); ++g) {
    const Wide eps = static_cast<Wide>(eps_grid[g]);
    const ComplexMatrix<Wide> sp = pw * eps, sq = qw * eps;
    const ComplexMatrix<Wide> exact = log_of_product<Wide>(sp, sq);
    ConvergencePoint pt;
    pt.eps = eps_grid[g];
    for (int k : orders) pt.truncation_errors.push_back(static_cast<double>((bch_truncation(sp, sq, k) - exact).norm()));

    // R is anti-Hermitian, so R/i is Hermitian: its spectrum is -i * spec(R).
    const DenseOperator r_over_i = (exact.cast<Complex>() * Complex(0.0, -1.0));
    const auto ev = hermitian_eigen((r_over_i + r_over_i.adjoint()) / 2.0).values;
    pt.principal_spread = ev.size() ? ev.maxCoeff() - ev.minCoeff() : 0.0;
    const auto& c = continued[g];
    pt.continued_spread = c.size() ? c.maxCoeff() - c.minCoeff() : 0.0;
    pt.divergent = pt.continued_spread >= kTwoPi;
    if (pt.divergent && (!report.divergence_onset || pt.eps < *report.divergence_onset)) report.divergence_onset = pt.eps;
    report.points.push_back(std::move(pt));
  }
  return report;
}

// Least-squares slope of log10(err) against log10(eps).
inline double loglog_slope(std::span<const double> eps, std::span<const double> err) {
  const std::size_t n = eps.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log10(eps[i]);
    my += std::log10(err[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log10(eps[i]) - mx;
    sxy += dx * (std::log10(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace revca

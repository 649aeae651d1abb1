#include "mipt/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "mipt/errors.hpp"

namespace mipt {

namespace {

void check_dims(const CorrelationState& s, int L) {
  require(s.C.rows() == L && s.C.cols() == L && s.F.rows() == L && s.F.cols() == L,
          ErrorKind::Parameter, "state dimensions do not match L = " + std::to_string(L));
}

}  // namespace

Drift drift_derivatives(const CorrelationState& state, const ModelParams& params,
                        const HoppingMatrices& hop) {
  const int L = params.L;
  check_dims(state, L);
  require(hop.H1.rows() == L && hop.H2.rows() == L, ErrorKind::Parameter,
          "hopping matrices do not match L");
  const cplx mi2(0.0, -2.0);
  const CMatrix H1 = hop.H1.cast<cplx>();
  const CMatrix H2 = hop.H2.cast<cplx>();
  const CMatrix& C = state.C;
  const CMatrix& F = state.F;
  const CMatrix Fd = F.adjoint();
  const CMatrix one_minus_Ct = CMatrix::Identity(L, L) - C.transpose();
  const double g = params.gamma;

  Drift d;
  d.dC = mi2 * (H1 * C - C * H1 + H2 * Fd + F * H2) + g * (C * C - F * Fd - C);
  d.dF = mi2 * (H1 * F + F * H1 + H2 * one_minus_Ct - C * H2) + g * (C * F - F * one_minus_Ct);
  return d;
}

CovarianceDrift::CovarianceDrift(const ModelParams& params, const HoppingMatrices& hop)
    : L_(params.L), rate_(params.gamma), h_(2 * params.L, 2 * params.L) {
  params.validate();
  const RMatrix G = hop.H2 - hop.H1;
  std::vector<Eigen::Triplet<double>> trip;
  for (int m = 0; m < L_; ++m) {
    for (int n = 0; n < L_; ++n) {
      if (G(m, n) == 0.0) continue;
      trip.emplace_back(m, L_ + n, 2.0 * G(m, n));
      trip.emplace_back(L_ + n, m, -2.0 * G(m, n));
    }
  }
  h_.setFromTriplets(trip.begin(), trip.end());
}

void CovarianceDrift::evaluate(const RMatrix& gamma, RMatrix& out) const {
  const int L = L_;
  RMatrix hg = h_ * gamma;
  out = hg - hg.transpose();
  if (rate_ == 0.0) return;

  const double half = 0.5 * rate_;
  RMatrix z(2 * L, 2 * L);
  z.noalias() = gamma.rightCols(L) * gamma.leftCols(L).transpose();
  out -= half * (z - z.transpose());
  for (int j = 0; j < L; ++j) {
    out(j, L + j) -= half;
    out(L + j, j) += half;
  }
}

Rk5Integrator::Rk5Integrator(const ModelParams& params, const HoppingMatrices& hop)
    : drift_(params, hop) {}

void Rk5Integrator::advance(RMatrix& y, double dt) {
  // Dormand-Prince tableau, 5th-order weights, used with a fixed step.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;

  drift_.evaluate(y, k_[0]);
  stage_ = y + dt * a21 * k_[0];
  drift_.evaluate(stage_, k_[1]);
  stage_ = y + dt * (a31 * k_[0] + a32 * k_[1]);
  drift_.evaluate(stage_, k_[2]);
  stage_ = y + dt * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
  drift_.evaluate(stage_, k_[3]);
  stage_ = y + dt * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
  drift_.evaluate(stage_, k_[4]);
  stage_ = y + dt * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
  drift_.evaluate(stage_, k_[5]);
  y += dt * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
}

CorrelationState Rk5Integrator::step(const CorrelationState& state, double dt) {
  require(dt > 0.0, ErrorKind::Parameter, "rk5_step: dt must be positive");
  check_dims(state, drift_.L());
  RMatrix gamma = majorana_covariance(state);
  advance(gamma, dt);
  CorrelationState next = state_from_covariance(gamma, state.time + dt);
  enforce_state_hygiene(next);
  return next;
}

CorrelationState rk5_step(const CorrelationState& state, const ModelParams& params,
                          const HoppingMatrices& hop, double dt) {
  Rk5Integrator integrator(params, hop);
  return integrator.step(state, dt);
}

void enforce_state_hygiene(CorrelationState& state) {
  state.C = (0.5 * (state.C + state.C.adjoint())).eval();
  state.F = (0.5 * (state.F - state.F.transpose())).eval();
  for (int j = 0; j < state.L(); ++j) {
    const double c = state.C(j, j).real();
    if (!(c >= -1e-6 && c <= 1.0 + 1e-6)) {
      std::ostringstream msg;
      msg << "step rejected: C_" << j << j << " = " << c << " left [-1e-6, 1+1e-6] at t = "
          << state.time << "; reduce dt";
      fail(ErrorKind::Numerical, msg.str());
    }
  }
}

JumpProbabilities jump_probabilities(const CorrelationState& state, const ModelParams& params,
                                     double dt) {
  check_dims(state, params.L);
  JumpProbabilities out;
  out.p.resize(static_cast<std::size_t>(params.L));
  for (int j = 0; j < params.L; ++j) {
    double p = params.gamma * dt * state.C(j, j).real();
    require(p >= -1e-10, ErrorKind::Numerical,
            "corrupted state: negative jump probability at site " + std::to_string(j));
    if (p < 0.0) p = 0.0;
    out.p[static_cast<std::size_t>(j)] = p;
    out.total += p;
  }
  return out;
}

std::optional<int> sample_jump(const JumpProbabilities& probs, double r) {
  require(probs.total < 1.0, ErrorKind::Configuration,
          "total jump probability P = " + std::to_string(probs.total) +
              " >= 1; use a smaller dt");
  if (r > probs.total || probs.total <= 0.0) return std::nullopt;
  double cum = 0.0;
  int last = -1;
  for (std::size_t m = 0; m < probs.p.size(); ++m) {
    if (probs.p[m] <= 0.0) continue;
    cum += probs.p[m];
    last = static_cast<int>(m);
    if (cum >= r) return last;
  }
  return last;  // r within rounding of P
}

CorrelationState apply_jump(const CorrelationState& state, int j) {
  const int L = state.L();
  require(j >= 0 && j < L, ErrorKind::Parameter, "apply_jump: site out of range");
  const double cjj = state.C(j, j).real();
  require(cjj > 1e-10, ErrorKind::InfeasibleJump,
          "apply_jump: C_jj = " + std::to_string(cjj) + " at site " + std::to_string(j) +
              " (outcome has zero probability)");
  const CMatrix& C = state.C;
  const CMatrix& F = state.F;
  const Eigen::VectorXcd c_col = C.col(j);
  const Eigen::RowVectorXcd c_row = C.row(j);
  const Eigen::VectorXcd f_col = F.col(j);
  const Eigen::RowVectorXcd f_row = F.row(j);

  CorrelationState out;
  out.time = state.time;
  // C'_mn = C_mn - C_mj C_jn / C_jj + F_mj (F^dag)_jn / C_jj
  out.C = C - (c_col * c_row - f_col * f_col.adjoint()) / cjj;
  // F'_mn = F_mn - C_mj F_jn / C_jj + F_jm C_nj / C_jj
  out.F = F - (c_col * f_row - f_row.transpose() * c_col.transpose()) / cjj;

  out.C.row(j).setZero();
  out.C.col(j).setZero();
  out.C(j, j) = 1.0;
  out.F.row(j).setZero();
  out.F.col(j).setZero();
  return out;
}

}  // namespace mipt

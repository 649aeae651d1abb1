#include "mipt/gaussian_state.hpp"

#include "mipt/errors.hpp"

namespace mipt {

CorrelationState initial_product_state(int L) {
  require(L > 0 && L % 2 == 0, ErrorKind::Parameter, "initial_product_state: L must be even");
  return {CMatrix::Identity(L, L), CMatrix::Zero(L, L), 0.0};
}

HoppingMatrices HoppingMatrices::build(const ModelParams& params) {
  params.validate();
  const int L = params.L;
  HoppingMatrices hop{RMatrix::Zero(L, L), RMatrix::Zero(L, L)};
  for (int m = 0; m + 1 < L; ++m) {
    hop.H1(m, m + 1) = hop.H1(m + 1, m) = -0.5;
    hop.H2(m, m + 1) = -0.5;
    hop.H2(m + 1, m) = 0.5;
  }
  // Anti-periodic closure of the even-parity sector.
  hop.H1(L - 1, 0) = hop.H1(0, L - 1) = 0.5;
  hop.H2(L - 1, 0) = 0.5;
  hop.H2(0, L - 1) = -0.5;
  hop.H1.diagonal().setConstant(params.h);
  return hop;
}

RMatrix majorana_covariance(const CorrelationState& state) {
  const int L = state.L();
  const CMatrix& C = state.C;
  const CMatrix& F = state.F;
  const CMatrix Ct = C.transpose();
  const CMatrix Fd = F.adjoint();

  RMatrix gamma(2 * L, 2 * L);
  // Gamma_aa = i (M_AA - 1), Gamma_bb = -i (M_BB + 1), Gamma_ab = M_AB, Gamma_ba = M_BA.
  gamma.topLeftCorner(L, L) = -(C - Ct + F + Fd).imag();
  gamma.bottomRightCorner(L, L) = (Ct - C + F + Fd).imag();
  gamma.topRightCorner(L, L) = (Ct + C - F + Fd).real() - RMatrix::Identity(L, L);
  gamma.bottomLeftCorner(L, L) = (-Ct - C - F + Fd).real() + RMatrix::Identity(L, L);
  return gamma;
}

CorrelationState state_from_covariance(const RMatrix& gamma, double time) {
  require(gamma.rows() == gamma.cols() && gamma.rows() % 2 == 0, ErrorKind::Contract,
          "state_from_covariance: covariance must be square with even dimension");
  const Eigen::Index L = gamma.rows() / 2;
  const cplx I(0.0, 1.0);
  const auto gaa = gamma.topLeftCorner(L, L).cast<cplx>();
  const auto gbb = gamma.bottomRightCorner(L, L).cast<cplx>();
  const auto gab = gamma.topRightCorner(L, L).cast<cplx>();
  const auto gba = gamma.bottomLeftCorner(L, L).cast<cplx>();

  CorrelationState s;
  s.C = (2.0 * CMatrix::Identity(L, L) - I * gaa - I * gbb + gab - gba) / 4.0;
  s.F = (-I * gaa + I * gbb - gab - gba) / 4.0;
  s.time = time;
  return s;
}

double purity_defect(const RMatrix& gamma) {
  const RMatrix sq = gamma * gamma + RMatrix::Identity(gamma.rows(), gamma.cols());
  return sq.cwiseAbs().maxCoeff();
}

StateDiagnostics diagnose(const CorrelationState& state) {
  StateDiagnostics d;
  d.hermiticity = (state.C - state.C.adjoint()).cwiseAbs().maxCoeff();
  d.antisymmetry = (state.F + state.F.transpose()).cwiseAbs().maxCoeff();
  d.purity = purity_defect(majorana_covariance(state));
  const Eigen::VectorXd diag = state.C.diagonal().real();
  d.diagonal_min = diag.minCoeff();
  d.diagonal_max = diag.maxCoeff();
  return d;
}

Eigen::VectorXd magnetization_z(const CorrelationState& state) {
  return 2.0 * state.C.diagonal().real().array() - 1.0;
}

}  // namespace mipt

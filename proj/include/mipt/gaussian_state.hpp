// Fermionic correlation matrices of a pure Gaussian state
// and their real Majorana-covariance form.
//
// Majorana ordering used throughout (block order):
//   w_j     = a_j = c_j + c_j^dag            j = 0..L-1
//   w_{L+j} = b_j = i (c_j - c_j^dag)
//   Gamma_pq = (i/2) <[w_p, w_q]>           real antisymmetric, Gamma^2 = -1 if pure.

#pragma once

#include <Eigen/Dense>

#include "mipt/spectral_model.hpp"

namespace mipt {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

struct CorrelationState {
  CMatrix C;  // C_mn = <c_m c_n^dag>
  CMatrix F;  // F_mn = <c_m c_n>
  double time{0.0};

  int L() const { return static_cast<int>(C.rows()); }
};

/// All spins along +z: C = 1, F = 0 (no fermions).
CorrelationState initial_product_state(int L);

/// Single-particle matrices of H_0 in the (c^dag, c) Nambu form.
struct HoppingMatrices {
  RMatrix H1;  // real symmetric: -1/2 nearest neighbour, +1/2 on the (L,1) corner, h on the diagonal
  RMatrix H2;  // real antisymmetric: (H2)_{m,m+1} = -1/2, (H2)_{L,1} = +1/2

  static HoppingMatrices build(const ModelParams& params);
};

/// Gamma (2L x 2L, block order) from (C, F). Imaginary residues of an
/// invalid state are discarded.
RMatrix majorana_covariance(const CorrelationState& state);

/// Inverse of majorana_covariance.
CorrelationState state_from_covariance(const RMatrix& gamma, double time = 0.0);

/// max |Gamma^2 + 1|.
double purity_defect(const RMatrix& gamma);

struct StateDiagnostics {
  double hermiticity{};     // max |C - C^dag|
  double antisymmetry{};    // max |F + F^T|
  double purity{};          // max |Gamma^2 + 1|
  double diagonal_min{};    // min Re C_jj
  double diagonal_max{};    // max Re C_jj
};

StateDiagnostics diagnose(const CorrelationState& state);

/// <sigma^z_j> = 2 C_jj - 1.
Eigen::VectorXd magnetization_z(const CorrelationState& state);

}  // namespace mipt

// Deterministic drift of (C, F) under the no-click generator,
// fixed-step RK5 integration, and quantum-jump updates.

#pragma once

#include <Eigen/SparseCore>

#include <optional>
#include <vector>

#include "mipt/gaussian_state.hpp"

namespace mipt {

struct Drift {
  CMatrix dC;
  CMatrix dF;
};

/// Right-hand side of the (C, F) equations of motion, term by term:
///   dC = -2i([H1,C] + H2 F^dag + F H2) + gamma (C^2 - F F^dag - C)
///   dF = -2i({H1,F} + H2 (1 - C^T) - C H2) + gamma (C F - F (1 - C^T))
/// Dense O(L^3); the integrator uses the equivalent covariance form below.
Drift drift_derivatives(const CorrelationState& state, const ModelParams& params,
                        const HoppingMatrices& hop);

/// Same flow written for the Majorana covariance:
///   dGamma = h Gamma - Gamma h - kappa - Gamma kappa Gamma
/// with h, kappa real antisymmetric. One 2L x L x 2L real product per call.
class CovarianceDrift {
 public:
  CovarianceDrift(const ModelParams& params, const HoppingMatrices& hop);

  void evaluate(const RMatrix& gamma, RMatrix& out) const;
  RMatrix operator()(const RMatrix& gamma) const {
    RMatrix out;
    evaluate(gamma, out);
    return out;
  }

  int L() const { return L_; }

 private:
  int L_;
  double rate_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> h_;
};

/// Fixed-step Dormand-Prince 5th-order integrator with reusable workspace.
class Rk5Integrator {
 public:
  Rk5Integrator(const ModelParams& params, const HoppingMatrices& hop);

  /// One step of size dt on the covariance, in place (no hygiene).
  void advance(RMatrix& gamma, double dt);

  /// One step on (C, F) followed by re-symmetrization and the diagonal bound check.
  CorrelationState step(const CorrelationState& state, double dt);

 private:
  CovarianceDrift drift_;
  RMatrix k_[6];
  RMatrix stage_;
};

CorrelationState rk5_step(const CorrelationState& state, const ModelParams& params,
                          const HoppingMatrices& hop, double dt);

/// C <- (C + C^dag)/2, F <- (F - F^T)/2, then Numerical error if any C_jj
/// leaves [-1e-6, 1 + 1e-6].
void enforce_state_hygiene(CorrelationState& state);

struct JumpProbabilities {
  std::vector<double> p;  // p_j = gamma dt C_jj
  double total{0.0};
};

JumpProbabilities jump_probabilities(const CorrelationState& state, const ModelParams& params,
                                     double dt);

/// Inverse-CDF draw given one uniform r in [0, 1): nullopt when r > P.
/// Configuration error if P >= 1.
std::optional<int> sample_jump(const JumpProbabilities& probs, double r);

template <class Rng>
std::optional<int> sample_jump(const JumpProbabilities& probs, Rng& rng) {
  return sample_jump(probs, rng.uniform());
}

/// Projection onto spin-up at site j; row/column j are overwritten exactly.
CorrelationState apply_jump(const CorrelationState& state, int site);

}  // namespace mipt

// Von Neumann entropy of a contiguous block of spins.

#pragma once

#include "mipt/correlators.hpp"
#include "mipt/gaussian_state.hpp"

namespace mipt {

struct EntropyRequest {
  int start{0};   // first site, 0-based; the block wraps around the ring
  int length{1};  // 1 <= length <= L - 1
};

/// Default subsystem for trajectory observables: start 0, length max(1, L/4).
EntropyRequest default_entropy_request(int L);

/// Entropy in nats from the restricted Majorana covariance. With
/// `check_purity` the global state is first required to satisfy
/// |Gamma^2 + 1| < 1e-6 (an O(L^3) check).
double entanglement_entropy(const RMatrix& gamma, const EntropyRequest& request,
                            bool check_purity = true);
double entanglement_entropy(const CorrelationState& state, const EntropyRequest& request);
double entanglement_entropy(const MajoranaBlocks& blocks, const EntropyRequest& request);

/// Symplectic eigenvalues mu_r in [0, 1] of the restricted covariance, ascending.
Eigen::VectorXd restricted_spectrum(const RMatrix& gamma, const EntropyRequest& request);

}  // namespace mipt

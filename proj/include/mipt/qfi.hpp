// Quantum Fisher information of collective spin operators
// O = (1/2) sum_j n_j . sigma_j and its maximization over unit vectors.
//
// F_Q[n] = sum_{a,b} sum_{i,j} n_i^a C^{ab}_{ij} n_j^b, so a product state with
// n_j in the xy-plane gives F_Q = L.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "mipt/correlators.hpp"

namespace mipt {

struct DirectionField {
  std::vector<Eigen::Vector3d> n;

  int L() const { return static_cast<int>(n.size()); }
  static DirectionField uniform(int L, const Eigen::Vector3d& dir);
  /// Contract error unless every |n_j| = 1 within 1e-12.
  void validate() const;
  /// Stacked (n_0^x, n_0^y, n_0^z, n_1^x, ...).
  Eigen::VectorXd flat() const;
  static DirectionField from_flat(const Eigen::VectorXd& v);
};

/// Real symmetric 3L x 3L matrix Q with F_Q = n^T Q n (index 3 i + alpha).
/// Numerical error if the imaginary part does not cancel (> 1e-6).
RMatrix qfi_matrix(const SpinCorrelationTensor& tensor);

double qfi_form(const SpinCorrelationTensor& tensor, const DirectionField& dirs);
double classical_energy(const SpinCorrelationTensor& tensor, const DirectionField& dirs);

struct AnnealSchedule {
  int sweeps_per_site{50};       // total sweeps = sweeps_per_site * L
  double cooling{0.98};          // T <- cooling * T after every sweep
  int calibration_moves{200};    // T0 = std of this many random-move energy deltas
  double uniform_move_probability{0.5};
  double cone_angle{0.3};        // radians
  bool polish{true};             // exact single-site ascent at T = 0 afterwards
  int threads{1};                // restarts run concurrently
};

struct AnnealDiagnostics {
  int restarts{};
  double accepted_fraction{};
  int best_restart{};
  long best_step{};  // sweep index of the best state in that restart; sweeps+1 if set by the polish
  double initial_temperature{};
};

struct QfiResult {
  double fq{};
  double fq_density{};
  DirectionField directions;
  AnnealDiagnostics diagnostics;
};

/// Simulated annealing with single-site Metropolis moves, `restarts` independent
/// runs seeded from derive_seed(seed, r). Deterministic for a given seed,
/// independent of schedule.threads.
QfiResult maximize_qfi(const SpinCorrelationTensor& tensor, const AnnealSchedule& schedule,
                       int restarts, std::uint64_t seed);

/// Same optimization on an explicit matrix Q.
QfiResult maximize_quadratic_form(const RMatrix& q, const AnnealSchedule& schedule, int restarts,
                                  std::uint64_t seed);

/// Test oracle, L <= 8 (Refusal otherwise): simultaneous projected ascent
/// n <- normalize_sites((Q + sigma) n) from every uniform and staggered
/// configuration on a spherical grid of the given resolution plus random starts.
double brute_force_max(const SpinCorrelationTensor& tensor, double angular_resolution,
                       int random_starts = 64, std::uint64_t seed = 0);

}  // namespace mipt

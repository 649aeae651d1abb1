// Model parameters, momentum grid, and the non-Hermitian
// quasiparticle spectrum of the monitored transverse-field Ising chain.
//
// Conventions: J = 1, periodic spin chain of even length L, even fermion
// parity sector (anti-periodic fermions). Jordan-Wigner maps sigma^+_j to the
// annihilator c_j, so the all-up state is the fermionic vacuum.

#pragma once

#include <complex>
#include <vector>

namespace mipt {

using cplx = std::complex<double>;

struct ModelParams {
  int L{4};
  double h{0.0};
  double gamma{0.0};

  /// Throws ErrorKind::Parameter unless L is even and >= 4 and gamma >= 0.
  void validate() const;
};

struct ModeData {
  double k{0.0};
  cplx epsilon;   // 2 cos k - 2h - i gamma/2
  double delta{};  // -2 sin k
  cplx lambda;    // E_k + i Gamma_k with Gamma_k <= 0
  cplx u;         // amplitude on |0_k>
  cplx v;         // amplitude on |k,-k>
};

/// gamma_c(h) = 4 sqrt(1 - h^2); Domain error for |h| >= 1.
double critical_rate(double h);

/// k* = arccos h, the momentum where the decay-rate gap closes; Domain error for |h| >= 1.
double gap_momentum(double h);

/// Positive anti-periodic momenta (2m-1) pi / L, m = 1..L/2, ascending.
std::vector<double> allowed_momenta(int L);

/// Quasiparticle energy for a single momentum, branch chosen so Im <= 0.
cplx quasiparticle_energy(double k, double h, double gamma);

/// Full mode table including the normalised no-click vacuum amplitudes.
std::vector<ModeData> mode_spectrum(const ModelParams& params);

struct VacuumAmplitude {
  cplx u;
  cplx v;
};

/// Vacuum of the non-Hermitian quasiparticles, one (u_k, v_k) per positive momentum.
std::vector<VacuumAmplitude> noclick_vacuum(const ModelParams& params);

/// Residual of the annihilation condition (Lambda - eps) v + Delta u for one mode.
/// Zero (to rounding) for the vacuum amplitudes.
cplx annihilation_residual(const ModeData& mode);

}  // namespace mipt

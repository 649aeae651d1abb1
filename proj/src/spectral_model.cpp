#include "mipt/spectral_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mipt/errors.hpp"

namespace mipt {

void ModelParams::validate() const {
  require(L >= 4 && L % 2 == 0, ErrorKind::Parameter,
          "L must be an even integer >= 4 (got " + std::to_string(L) + ")");
  require(std::isfinite(h), ErrorKind::Parameter, "h must be finite");
  require(std::isfinite(gamma) && gamma >= 0.0, ErrorKind::Parameter,
          "gamma must satisfy gamma >= 0 (got " + std::to_string(gamma) + ")");
}

double critical_rate(double h) {
  require(std::abs(h) < 1.0, ErrorKind::Domain,
          "critical_rate: no gapless phase exists at this field (|h| >= 1)");
  return 4.0 * std::sqrt(1.0 - h * h);
}

double gap_momentum(double h) {
  require(std::abs(h) < 1.0, ErrorKind::Domain,
          "gap_momentum: k* is undefined for |h| >= 1");
  return std::acos(h);
}

std::vector<double> allowed_momenta(int L) {
  require(L > 0 && L % 2 == 0, ErrorKind::Parameter,
          "allowed_momenta: L must be a positive even integer");
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(L / 2));
  for (int m = 1; m <= L / 2; ++m) {
    ks.push_back((2.0 * m - 1.0) * std::numbers::pi / L);
  }
  return ks;
}

cplx quasiparticle_energy(double k, double h, double gamma) {
  const double c = std::cos(k);
  const cplx radicand(1.0 - 2.0 * h * c + h * h - gamma * gamma / 16.0,
                      0.5 * gamma * (h - c));
  cplx lambda = 2.0 * std::sqrt(radicand);
  // On the gap-closing line Im vanishes up to rounding; keep Re >= 0 there.
  const double tiny = 1e-13 * std::abs(lambda);
  if (std::abs(lambda.imag()) <= tiny) return cplx(std::abs(lambda.real()), -std::abs(lambda.imag()));
  if (lambda.imag() > 0.0) lambda = -lambda;
  return lambda;
}

std::vector<ModeData> mode_spectrum(const ModelParams& params) {
  params.validate();
  std::vector<ModeData> modes;
  for (double k : allowed_momenta(params.L)) {
    ModeData m;
    m.k = k;
    m.epsilon = cplx(2.0 * std::cos(k) - 2.0 * params.h, -0.5 * params.gamma);
    m.delta = -2.0 * std::sin(k);
    m.lambda = quasiparticle_energy(k, params.h, params.gamma);

    const cplx a = m.lambda - m.epsilon;
    const double norm = std::sqrt(std::norm(a) + m.delta * m.delta);
    // Delta_k != 0 on the anti-periodic grid, so norm > 0; guard anyway.
    require(norm > 0.0, ErrorKind::Numerical,
            "exceptional mode at k = " + std::to_string(k) + ": state is |0_k> exactly");
    m.u = a / norm;
    m.v = cplx(-m.delta / norm, 0.0);
    modes.push_back(m);
  }
  return modes;
}

std::vector<VacuumAmplitude> noclick_vacuum(const ModelParams& params) {
  std::vector<VacuumAmplitude> amps;
  for (const auto& m : mode_spectrum(params)) amps.push_back({m.u, m.v});
  return amps;
}

cplx annihilation_residual(const ModeData& mode) {
  return (mode.lambda - mode.epsilon) * mode.v + mode.delta * mode.u;
}

}  // namespace mipt

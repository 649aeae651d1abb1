#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mipt/errors.hpp"
#include "mipt/spectral_model.hpp"

using namespace mipt;
using std::numbers::pi;

namespace {

// |Gamma_k| at the grid momentum nearest k*.
double gap_near_kstar(int L, double h, double gamma) {
  const double ks = gap_momentum(h);
  double best = 1e9, gap = 0.0;
  for (const auto& m : mode_spectrum({L, h, gamma})) {
    if (std::abs(m.k - ks) < best) {
      best = std::abs(m.k - ks);
      gap = std::abs(m.lambda.imag());
    }
  }
  return gap;
}

double min_gap(int L, double h, double gamma) {
  double g = 1e9;
  for (const auto& m : mode_spectrum({L, h, gamma})) g = std::min(g, std::abs(m.lambda.imag()));
  return g;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ModelParams({4, 0.2, 0.0}).validate());
  CHECK_THROWS_AS(ModelParams({5, 0.2, 1.0}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({2, 0.2, 1.0}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({8, 0.2, -1.0}).validate(), Error);
}

TEST_CASE("critical rate") {
  CHECK(critical_rate(0.0) == doctest::Approx(4.0));
  CHECK(critical_rate(0.6) == doctest::Approx(3.2));
  CHECK(critical_rate(0.2) == doctest::Approx(3.9192).epsilon(1e-4));
  CHECK(critical_rate(-0.6) == doctest::Approx(3.2));
  CHECK_THROWS_AS(critical_rate(1.0), Error);
  try {
    critical_rate(1.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("allowed momenta") {
  const auto k4 = allowed_momenta(4);
  REQUIRE(k4.size() == 2);
  CHECK(k4[0] == doctest::Approx(pi / 4));
  CHECK(k4[1] == doctest::Approx(3 * pi / 4));
  const auto k8 = allowed_momenta(8);
  REQUIRE(k8.size() == 4);
  for (int m = 0; m < 4; ++m) CHECK(k8[m] == doctest::Approx((2 * m + 1) * pi / 8));
  for (int L : {6, 10, 64, 170}) {
    const auto ks = allowed_momenta(L);
    CHECK(static_cast<int>(ks.size()) == L / 2);
    CHECK(ks.back() < pi);
    CHECK(ks.front() > 0.0);
    for (std::size_t q = 1; q < ks.size(); ++q) CHECK(ks[q] > ks[q - 1]);
    // e^{i k L} = -1
    for (double k : ks) CHECK(std::cos(k * L) == doctest::Approx(-1.0));
  }
  CHECK_THROWS_AS(allowed_momenta(7), Error);
}

TEST_CASE("gap momentum") {
  CHECK(gap_momentum(0.0) == doctest::Approx(pi / 2));
  CHECK(gap_momentum(0.2) == doctest::Approx(1.36944).epsilon(1e-5));
  CHECK(std::cos(gap_momentum(0.2)) == doctest::Approx(0.2));
  CHECK(gap_momentum(1.0 - 1e-12) < 1e-5);
  CHECK_THROWS_AS(gap_momentum(-1.0), Error);
}

TEST_CASE("mode spectrum examples") {
  for (const auto& m : mode_spectrum({16, 0.0, 0.0})) {
    CHECK(std::abs(m.lambda - cplx(2.0, 0.0)) < 1e-12);
  }
  for (double h : {-1.5, 0.3, 1.0, 2.0}) {
    for (const auto& m : mode_spectrum({32, h, 0.0})) {
      const double e = 2.0 * std::sqrt(1.0 - 2.0 * h * std::cos(m.k) + h * h);
      CHECK(std::abs(m.lambda - cplx(e, 0.0)) < 1e-12);
    }
  }
  // At k = k* the imaginary part vanishes.
  const double h = 0.2, gamma = 2.0;
  const cplx lam = quasiparticle_energy(std::acos(h), h, gamma);
  CHECK(std::abs(lam.imag()) < 1e-12);
  CHECK(lam.real() == doctest::Approx(2.0 * std::sqrt(1.0 - h * h - gamma * gamma / 16.0)));
}

TEST_CASE("mode invariants") {
  for (double h : {-0.7, 0.2, 0.9, 1.4}) {
    for (double gamma : {0.0, 0.5, 3.0, 8.0}) {
      for (const auto& m : mode_spectrum({24, h, gamma})) {
        CHECK(m.lambda.imag() <= 0.0);
        CHECK((-m.lambda).imag() >= 0.0);
        CHECK(std::norm(m.u) + std::norm(m.v) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.delta == doctest::Approx(-2.0 * std::sin(m.k)));
        CHECK(std::abs(m.delta) > 0.0);
        CHECK(m.epsilon.real() == doctest::Approx(2.0 * std::cos(m.k) - 2.0 * h));
        CHECK(m.epsilon.imag() == doctest::Approx(-gamma / 2.0));
        // Lambda^2 = eps^2 + Delta^2 (eigenvalues of the 2 x 2 block).
        CHECK(std::abs(m.lambda * m.lambda - m.epsilon * m.epsilon - m.delta * m.delta) < 1e-10);
        CHECK(std::abs(annihilation_residual(m)) < 1e-12);
      }
    }
  }
}

TEST_CASE("vacuum amplitudes") {
  // Strong field: the vacuum is the polarized state.
  for (const auto& a : noclick_vacuum({16, 1e6, 0.0})) CHECK(std::abs(a.v) < 1e-5);

  // gamma = 0, h = 0 at k = pi/2: (u, v) = (1, 1)/sqrt(2).
  const double k = pi / 2;
  const cplx lam = quasiparticle_energy(k, 0.0, 0.0);
  const cplx eps(2.0 * std::cos(k), 0.0);
  const double delta = -2.0 * std::sin(k);
  CHECK(std::abs(lam - cplx(2.0, 0.0)) < 1e-12);
  const double n = std::sqrt(std::norm(lam - eps) + delta * delta);
  CHECK(std::abs((lam - eps) / n - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(-delta / n - 1.0 / std::sqrt(2.0)) < 1e-12);

  double total = 0.0;
  for (const auto& a : noclick_vacuum({40, 0.3, 1.7})) total += std::norm(a.u) + std::norm(a.v) - 1.0;
  CHECK(std::abs(total) < 1e-12);
}

TEST_CASE("gapless window closes with L") {
  const double h = 0.2, gamma = 0.5 * critical_rate(h);
  double prev = 1e9;
  for (int L : {64, 128, 256, 512}) {
    const double g = gap_near_kstar(L, h, gamma);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("gapped window stays open") {
  struct Case {
    double h, gamma;
  };
  for (const Case c : {Case{0.2, 1.5 * critical_rate(0.2)}, Case{1.5, 1.0}, Case{0.5, 8.0}}) {
    const double g128 = min_gap(128, c.h, c.gamma);
    const double g512 = min_gap(512, c.h, c.gamma);
    CHECK(g128 > 0.0);
    CHECK(std::abs(g512 - g128) < 0.05 * g128);
  }
}

TEST_CASE("Hermitian limit reproduces the transverse-field Ising dispersion") {
  for (double h : {0.0, 0.5, 1.0, 3.0}) {
    for (double k : allowed_momenta(64)) {
      const double ref = 2.0 * std::sqrt(1.0 - 2.0 * h * std::cos(k) + h * h);
      CHECK(std::abs(quasiparticle_energy(k, h, 0.0) - cplx(ref, 0.0)) < 1e-12);
    }
  }
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bridge.hpp"
#include "mipt/errors.hpp"
#include "mipt/qfi.hpp"

using namespace mipt;
using Eigen::Vector3d;

namespace {

SpinCorrelationTensor product_tensor(int L) { return correlation_tensor(initial_product_state(L)); }

SpinCorrelationTensor random_tensor(int L, std::uint64_t seed) {
  const oracle::Chain chain(L);
  return correlation_tensor(oracle::correlation_state(chain, chain.random_gaussian_state(seed, 0.5)));
}

DirectionField random_dirs(int L, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  DirectionField d;
  for (int j = 0; j < L; ++j) {
    Vector3d v(nd(gen), nd(gen), nd(gen));
    d.n.push_back(v.normalized());
  }
  return d;
}

AnnealSchedule quick() {
  AnnealSchedule s;
  s.sweeps_per_site = 50;
  return s;
}

}  // namespace

TEST_CASE("product state examples") {
  for (int L : {4, 8, 16}) {
    const auto t = product_tensor(L);
    CHECK(qfi_form(t, DirectionField::uniform(L, Vector3d::UnitX())) == doctest::Approx(L));
    CHECK(qfi_form(t, DirectionField::uniform(L, Vector3d::UnitY())) == doctest::Approx(L));
    CHECK(std::abs(qfi_form(t, DirectionField::uniform(L, Vector3d::UnitZ()))) < 1e-12);
    const auto d = random_dirs(L, 3);
    CHECK(classical_energy(t, d) == doctest::Approx(-qfi_form(t, d)));
  }
}

TEST_CASE("direction field validation") {
  DirectionField d = DirectionField::uniform(4, Vector3d::UnitX());
  CHECK_NOTHROW(d.validate());
  d.n[2] = Vector3d(1.0, 1e-5, 0.0);
  CHECK_THROWS_AS(d.validate(), Error);
  const auto r = random_dirs(5, 1);
  const auto back = DirectionField::from_flat(r.flat());
  for (int j = 0; j < 5; ++j) CHECK((back.n[j] - r.n[j]).norm() == 0.0);
  CHECK_THROWS_AS(qfi_form(product_tensor(4), random_dirs(6, 1)), Error);
}

TEST_CASE("qfi_form equals four times the variance of the collective spin") {
  for (int L : {4, 6}) {
    const oracle::Chain chain(L);
    const oracle::Vec psi = chain.random_gaussian_state(17 + L, 0.6);
    const auto t = correlation_tensor(oracle::correlation_state(chain, psi));
    for (std::uint64_t s = 0; s < 4; ++s) {
      const auto d = random_dirs(L, s);
      oracle::Mat O = oracle::Mat::Zero(chain.dim(), chain.dim());
      for (int j = 0; j < L; ++j) {
        for (int a = 0; a < 3; ++a) O += 0.5 * d.n[j](a) * chain.pauli(a, j);
      }
      const double mean = oracle::Chain::expect(psi, O).real();
      const double var = oracle::Chain::expect(psi, O * O).real() - mean * mean;
      CHECK(qfi_form(t, d) == doctest::Approx(4.0 * var).epsilon(1e-9));
    }
  }
}

TEST_CASE("sign flip and xy reflection leave the form unchanged") {
  const auto t = random_tensor(6, 9);
  // Reflecting n^y maps the form onto that of the tensor with xy and yx negated
  // (the complex-conjugate state); without that it is not an invariance.
  SpinCorrelationTensor mirrored = t;
  mirrored.xy = -t.xy;
  mirrored.yx = -t.yx;
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto d = random_dirs(6, 100 + s);
    const double f = qfi_form(t, d);
    CHECK(f >= 0.0);
    auto neg = d;
    for (auto& v : neg.n) v = -v;
    CHECK(qfi_form(t, neg) == doctest::Approx(f).epsilon(1e-12));
    auto refl = d;
    for (auto& v : refl.n) v.y() = -v.y();
    CHECK(qfi_form(mirrored, refl) == doctest::Approx(f).epsilon(1e-10));
  }
  // Tensors with vanishing xy blocks are invariant outright.
  const auto p = product_tensor(6);
  auto d = random_dirs(6, 4), refl = d;
  for (auto& v : refl.n) v.y() = -v.y();
  CHECK(qfi_form(p, refl) == doctest::Approx(qfi_form(p, d)));
}

TEST_CASE("annealer on the product state") {
  const auto res = maximize_qfi(product_tensor(12), quick(), 2, 5);
  CHECK(res.fq_density == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.fq == doctest::Approx(res.fq_density * 12));
  for (const auto& v : res.directions.n) CHECK(std::abs(v.z()) < 1e-3);
  CHECK(res.diagnostics.restarts == 2);
  CHECK(res.diagnostics.accepted_fraction > 0.0);
}

TEST_CASE("brute-force oracle examples") {
  CHECK(brute_force_max(product_tensor(4), std::numbers::pi / 12) == doctest::Approx(4.0));

  // Two sites: unit on-site xx and C^xx_12 = c.
  const double c = 0.35;
  SpinCorrelationTensor t;
  t.L = 2;
  t.xx = CMatrix::Identity(2, 2);
  t.xx(0, 1) = t.xx(1, 0) = c;
  t.yy = t.zz = t.xy = t.yx = CMatrix::Zero(2, 2);
  CHECK(brute_force_max(t, std::numbers::pi / 12) == doctest::Approx(2.0 + 2.0 * c));

  CHECK_THROWS_AS(brute_force_max(product_tensor(10), std::numbers::pi / 12), Error);
  try {
    brute_force_max(product_tensor(10), 0.3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Refusal);
  }
}

TEST_CASE("annealer reaches the brute-force maximum on small random tensors") {
  for (int L : {4, 6}) {
    for (std::uint64_t s = 0; s < 6; ++s) {
      const auto t = random_tensor(L, 40 + s);
      const double ref = brute_force_max(t, std::numbers::pi / 12);
      const double got = maximize_qfi(t, quick(), 4, s).fq;
      CHECK(got >= 0.999 * ref);
      CHECK(got <= ref * (1.0 + 1e-6) + 1e-9);
    }
  }
}

TEST_CASE("joint optimum beats the decoupled xy and z optima") {
  const auto t = random_tensor(6, 77);
  const RMatrix q = qfi_matrix(t);
  RMatrix qxy = q, qz = q;
  for (int i = 0; i < 18; ++i) {
    for (int j = 0; j < 18; ++j) {
      const bool zi = i % 3 == 2, zj = j % 3 == 2;
      if (zi || zj) qxy(i, j) = 0.0;
      if (!(zi && zj)) qz(i, j) = 0.0;
    }
  }
  // The restricted forms are evaluated on directions confined to their subspace.
  const auto rxy = maximize_quadratic_form(qxy, quick(), 4, 1);
  double best_xy = 0.0;
  {
    DirectionField d = rxy.directions;
    for (auto& v : d.n) {
      v.z() = 0.0;
      v = v.norm() > 0 ? Vector3d(v.normalized()) : Vector3d::UnitX();
    }
    best_xy = qfi_form(t, d);
  }
  const double best_z = qfi_form(t, DirectionField::uniform(6, Vector3d::UnitZ()));
  double best_z_stag = 0.0;
  {
    DirectionField d = DirectionField::uniform(6, Vector3d::UnitZ());
    for (int j = 1; j < 6; j += 2) d.n[j] = -d.n[j];
    best_z_stag = qfi_form(t, d);
  }
  const double joint = maximize_qfi(t, quick(), 4, 1).fq;
  CHECK(joint >= std::max({best_xy, best_z, best_z_stag}) - 1e-8);
}

TEST_CASE("determinism and thread independence") {
  const auto t = random_tensor(6, 5);
  AnnealSchedule one = quick(), many = quick();
  many.threads = 3;
  const auto a = maximize_qfi(t, one, 5, 123);
  const auto b = maximize_qfi(t, one, 5, 123);
  const auto c = maximize_qfi(t, many, 5, 123);
  CHECK(a.fq == b.fq);
  CHECK(a.fq == c.fq);
  CHECK(a.diagnostics.best_restart == c.diagnostics.best_restart);
  for (int j = 0; j < 6; ++j) CHECK((a.directions.n[j] - c.directions.n[j]).norm() == 0.0);
}

TEST_CASE("gapless no-click vacuum: directions alternate along x") {
  const int L = 40;
  const double h = 0.2, gamma = 0.3 * critical_rate(h);
  const auto t = correlation_tensor(noclick_vacuum({L, h, gamma}), L);
  const auto res = maximize_qfi(t, AnnealSchedule{}, 4, 2);
  int along_x = 0, changes = 0;
  for (int j = 0; j < L; ++j) {
    if (std::abs(res.directions.n[j].x()) > 0.9) ++along_x;
    if (res.directions.n[j].x() * res.directions.n[(j + 1) % L].x() < 0.0) ++changes;
  }
  CHECK(along_x >= 0.9 * L);
  const double k = std::numbers::pi * changes / L;
  CHECK(std::abs(k - (std::numbers::pi - gap_momentum(h))) < 0.08 * (std::numbers::pi - gap_momentum(h)));
  CHECK(res.fq_density > 1.0);
}

#include <doctest.h>

#include <cmath>
#include <string>

#include "mipt/errors.hpp"
#include "mipt/noclick.hpp"

using namespace mipt;

namespace {

NoclickOptions fast_options(std::uint64_t seed = 1) {
  NoclickOptions o;
  o.restarts = 2;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("default size lists") {
  const auto d = default_scan_sizes();
  REQUIRE(d.size() == 14);
  CHECK(d.front() == 40);
  CHECK(d.back() == 170);
  const auto s = smoke_scan_sizes();
  CHECK(s.front() == 16);
  CHECK(s.back() == 64);
  for (int L : s) CHECK(L % 2 == 0);
}

TEST_CASE("observables compose vacuum, tensor, QFI and entropy") {
  const auto obs = noclick_observables({32, 0.4, 1.0}, fast_options());
  CHECK(obs.tensor.L == 32);
  CHECK(obs.subsystem.length == 8);
  CHECK(obs.entropy > 0.0);
  CHECK(obs.qfi.fq_density >= 1.0 - 1e-9);
  CHECK(obs.qfi.fq == doctest::Approx(32 * obs.qfi.fq_density));
  // The returned directions witness the returned value.
  CHECK(qfi_form(obs.tensor, obs.qfi.directions) == doctest::Approx(obs.qfi.fq));

  NoclickOptions o = fast_options();
  o.ell = 5;
  CHECK(noclick_observables({32, 0.4, 1.0}, o).subsystem.length == 5);
}

TEST_CASE("gapped paramagnet has an intensive QFI density") {
  const double f64 = noclick_observables({64, 2.0, 0.0}, fast_options()).qfi.fq_density;
  const double f128 = noclick_observables({128, 2.0, 0.0}, fast_options()).qfi.fq_density;
  CHECK(std::abs(f128 - f64) < 0.03 * f64);
}

TEST_CASE("errors carry the parameters") {
  try {
    noclick_observables({31, 0.2, 1.0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parameter);
    CHECK(std::string(e.what()).find("L = 31") != std::string::npos);
  }
}

TEST_CASE("smoke scan: gapped point has p near zero, critical point near 3/4") {
  ScanSpec spec;
  spec.grid = {{0.5, 8.0}, {1.0, 0.0}};
  spec.sizes = smoke_scan_sizes();
  spec.options = fast_options();
  const auto pts = scan_phase_diagram(spec);
  REQUIRE(pts.size() == 2);
  REQUIRE(pts[0].error.empty());
  REQUIRE(pts[0].p.has_value());
  CHECK(pts[0].rows.size() == spec.sizes.size());
  CHECK(std::abs(pts[0].p->exponent) < 0.1);
  CHECK(pts[0].gamma_over_gc == doctest::Approx(8.0 / critical_rate(0.5)));
  REQUIRE(pts[1].p.has_value());
  MESSAGE("critical p on smoke sizes = " << pts[1].p->exponent);
  CHECK(std::abs(pts[1].p->exponent - 0.75) < 0.1);
  CHECK(std::isnan(pts[1].gamma_over_gc));
}

TEST_CASE("scan is deterministic and thread independent") {
  ScanSpec spec;
  spec.grid = {{0.2, 1.0}, {0.6, 2.0}};
  spec.sizes = {16, 24, 32, 40};
  spec.options = fast_options();
  spec.seed = 9;
  const auto a = scan_phase_diagram(spec);
  spec.threads = 3;
  const auto b = scan_phase_diagram(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].rows.size() == b[i].rows.size());
    for (std::size_t k = 0; k < a[i].rows.size(); ++k) {
      CHECK(a[i].rows[k].fq_max == b[i].rows[k].fq_max);
      CHECK(a[i].rows[k].entropy == b[i].rows[k].entropy);
    }
    CHECK(a[i].p->exponent == b[i].p->exponent);
  }
}

TEST_CASE("fit failures are recorded per point and the scan continues") {
  ScanSpec spec;
  spec.grid = {{0.2, 1.0}, {0.5, 8.0}};
  spec.sizes = {16, 24, 32};
  spec.options = fast_options();
  const auto pts = scan_phase_diagram(spec);
  REQUIRE(pts.size() == 2);
  for (const auto& pt : pts) {
    CHECK(!pt.p.has_value());
    CHECK(pt.error.find("insufficient") != std::string::npos);
    CHECK(pt.rows.size() == 3);
  }
}

TEST_CASE("scan spec validation") {
  ScanSpec spec;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.grid = {{0.2, 1.0}};
  spec.sizes = {16, 15};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.sizes = {24, 16};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.sizes = {16, 24};
  spec.grid = {{0.2, -1.0}};
  CHECK_THROWS_AS(spec.validate(), Error);
}

#include "mipt/noclick.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mipt/errors.hpp"
#include "mipt/parallel.hpp"
#include "mipt/rng.hpp"

namespace mipt {

namespace {

double ratio_to_critical(double h, double gamma) {
  if (std::abs(h) >= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return gamma / critical_rate(h);
}

}  // namespace

NoclickObservables noclick_observables(const ModelParams& params, const NoclickOptions& options) {
  try {
    params.validate();
    NoclickObservables out;
    out.params = params;
    const RMatrix gamma =
        covariance_from_blocks(blocks_from_amplitudes(noclick_vacuum(params), params.L));
    out.tensor = translation_invariant_tensor(gamma);
    out.qfi = maximize_qfi(out.tensor, options.schedule, options.restarts, options.seed);
    out.subsystem = options.ell > 0 ? EntropyRequest{0, options.ell}
                                    : default_entropy_request(params.L);
    out.entropy = entanglement_entropy(gamma, out.subsystem);
    return out;
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "no-click point (h = " << params.h << ", gamma = " << params.gamma
        << ", L = " << params.L << "): " << e.what();
    throw Error(e.kind(), msg.str());
  }
}

std::vector<int> default_scan_sizes() {
  std::vector<int> s;
  for (int L = 40; L <= 170; L += 10) s.push_back(L);
  return s;
}

std::vector<int> smoke_scan_sizes() {
  std::vector<int> s;
  for (int L = 16; L <= 64; L += 8) s.push_back(L);
  return s;
}

void ScanSpec::validate() const {
  require(!grid.empty(), ErrorKind::Parameter, "scan grid must not be empty");
  require(!sizes.empty(), ErrorKind::Parameter, "scan needs at least one size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    require(sizes[i] >= 4 && sizes[i] % 2 == 0, ErrorKind::Parameter,
            "scan sizes must be even and >= 4");
    require(i == 0 || sizes[i] > sizes[i - 1], ErrorKind::Parameter,
            "scan sizes must be strictly ascending");
  }
  for (const auto& [h, g] : grid) ModelParams{sizes.front(), h, g}.validate();
}

std::vector<ScanPoint> scan_phase_diagram(const ScanSpec& spec) {
  spec.validate();
  const std::size_t n_points = spec.grid.size();
  const std::size_t n_sizes = spec.sizes.size();

  struct Item {
    ScanRow row;
    std::string error;
  };
  std::vector<Item> items(n_points * n_sizes);
  parallel_for(items.size(), spec.threads, [&](std::size_t w) {
    const std::size_t pi = w / n_sizes, si = w % n_sizes;
    const auto [h, g] = spec.grid[pi];
    const int L = spec.sizes[si];
    Item& item = items[w];
    item.row = {h, g, ratio_to_critical(h, g), L, 0.0, 0.0};
    NoclickOptions opts = spec.options;
    opts.schedule.threads = 1;
    opts.seed = derive_seed(derive_seed(spec.seed, pi), static_cast<std::uint64_t>(L));
    try {
      const auto obs = noclick_observables({L, h, g}, opts);
      item.row.fq_max = obs.qfi.fq_density;
      item.row.entropy = obs.entropy;
    } catch (const Error& e) {
      item.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
  });

  std::vector<ScanPoint> points(n_points);
  for (std::size_t pi = 0; pi < n_points; ++pi) {
    ScanPoint& pt = points[pi];
    pt.h = spec.grid[pi].first;
    pt.gamma = spec.grid[pi].second;
    pt.gamma_over_gc = ratio_to_critical(pt.h, pt.gamma);
    std::vector<double> sizes, values;
    for (std::size_t si = 0; si < n_sizes; ++si) {
      const Item& item = items[pi * n_sizes + si];
      if (!item.error.empty()) {
        if (pt.error.empty()) pt.error = item.error;
        continue;
      }
      pt.rows.push_back(item.row);
      sizes.push_back(item.row.L);
      values.push_back(item.row.fq_max);
    }
    if (!pt.error.empty()) continue;
    try {
      pt.p = fit_power_law(sizes, values, spec.window);
    } catch (const Error& e) {
      pt.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
  }
  return points;
}

}  // namespace mipt

#include "mipt/observers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mipt/errors.hpp"
#include "mipt/rng.hpp"

namespace mipt {

Observer entropy_observer(EntropyRequest request) {
  return [request](const Snapshot& s, Observation& obs) {
    obs["entropy"] = entanglement_entropy(s.gamma, request, false);
  };
}

Observer qfi_observer(AnnealSchedule schedule, int restarts, std::uint64_t seed) {
  return [schedule, restarts, seed](const Snapshot& s, Observation& obs) {
    const SpinCorrelationTensor tensor = correlation_tensor(s.gamma);
    const QfiResult res =
        maximize_qfi(tensor, schedule, restarts, derive_seed(seed, static_cast<std::uint64_t>(s.step)));
    obs["fq_max"] = res.fq_density;
  };
}

Observer magnetization_observer() {
  return [](const Snapshot& s, Observation& obs) { obs["mz"] = magnetization_z(s.state).mean(); };
}

Observer decay_observer(Block block, FitWindow window) {
  return [block, window](const Snapshot& s, Observation& obs) {
    const std::string name = block_name(block);
    const int L = s.state.L();
    const int ell_max = std::min(L / 2, static_cast<int>(std::floor(window.hi)));
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double r2 = lambda;
    if (ell_max >= 1) {
      const auto profile = averaged_abs_profile(s.gamma, block, ell_max);
      std::vector<double> ells(profile.size());
      for (std::size_t k = 0; k < ells.size(); ++k) ells[k] = static_cast<double>(k + 1);
      try {
        const FitResult f = fit_decay_exponent(ells, profile, window);
        lambda = f.exponent;
        r2 = f.r2;
      } catch (const Error&) {
        // too few points or a vanishing correlator: leave NaN
      }
    }
    obs["lambda_" + name] = lambda;
    obs["r2_" + name] = r2;
  };
}

}  // namespace mipt

#include "mipt/trajectory.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mipt/errors.hpp"
#include "mipt/parallel.hpp"
#include "mipt/rng.hpp"

namespace mipt {

namespace {

long steps_for(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const long n = std::lround(ratio);
  require(n >= 1 && std::abs(ratio - static_cast<double>(n)) < 1e-6 * std::max(1.0, ratio),
          ErrorKind::Configuration,
          std::string(what) + " must be a positive integer multiple of dt");
  return n;
}

}  // namespace

TrajectoryRecord evolve_trajectory(const ModelParams& params, const TrajectoryOptions& options,
                                   std::uint64_t seed, const std::vector<Observer>& observers) {
  params.validate();
  const double dt = options.dt;
  require(dt > 0.0, ErrorKind::Parameter, "dt must be positive");
  require(dt * params.gamma * params.L < 0.5, ErrorKind::Configuration,
          "dt * gamma * L must be < 0.5 (got " + std::to_string(dt * params.gamma * params.L) +
              "); reduce dt");
  const long n_steps = steps_for(options.t_max, dt, "t_max");
  const long stride = steps_for(options.sample_every, dt, "sample_every");

  const int L = params.L;
  const HoppingMatrices hop = HoppingMatrices::build(params);
  Rk5Integrator integrator(params, hop);
  Rng rng(seed);

  TrajectoryRecord rec;
  rec.params = params;
  rec.seed = seed;
  rec.dt = dt;

  RMatrix gamma = majorana_covariance(initial_product_state(L));
  JumpProbabilities probs;
  probs.p.assign(static_cast<std::size_t>(L), 0.0);

  auto sample = [&](long step, double t) {
    if (t < options.observe_from - 0.5 * dt) return;
    const CorrelationState state = state_from_covariance(gamma, t);
    const Snapshot snap{state, gamma, step};
    Observation obs;
    for (const auto& observer : observers) observer(snap, obs);
    const std::size_t index = rec.sample_times.size();
    rec.sample_times.push_back(t);
    for (const auto& [key, value] : obs) {
      auto& series = rec.observables[key];
      series.resize(index, std::numeric_limits<double>::quiet_NaN());
      series.push_back(value);
    }
  };

  long step = 0;
  double t = 0.0;
  try {
    sample(0, 0.0);
    for (step = 1; step <= n_steps; ++step) {
      integrator.advance(gamma, dt);
      t = static_cast<double>(step) * dt;
      gamma = (0.5 * (gamma - gamma.transpose())).eval();

      probs.total = 0.0;
      for (int j = 0; j < L; ++j) {
        const double cjj = 0.5 * (1.0 + gamma(j, L + j));
        if (!(cjj >= -1e-6 && cjj <= 1.0 + 1e-6)) {
          std::ostringstream msg;
          msg << "step rejected: C_jj = " << cjj << " at site " << j << "; reduce dt";
          fail(ErrorKind::Numerical, msg.str());
        }
        double p = params.gamma * dt * cjj;
        require(p >= -1e-10, ErrorKind::Numerical, "corrupted state: negative jump probability");
        p = std::max(p, 0.0);
        probs.p[static_cast<std::size_t>(j)] = p;
        probs.total += p;
      }
      rec.expected_jumps += probs.total;

      if (const auto site = sample_jump(probs, rng.uniform())) {
        CorrelationState state = state_from_covariance(gamma, t);
        state = apply_jump(state, *site);
        gamma = majorana_covariance(state);
        rec.jumps.push_back({t, *site});
      }
      if (step % stride == 0) sample(step, t);
    }
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "trajectory (seed " << seed << ") step " << step << ", t = " << t << ": " << e.what();
    throw Error(e.kind(), msg.str());
  }

  for (auto& [key, series] : rec.observables) {
    series.resize(rec.sample_times.size(), std::numeric_limits<double>::quiet_NaN());
  }
  rec.final_state = state_from_covariance(gamma, t);
  return rec;
}

std::vector<TrajectoryRecord> run_ensemble(const ModelParams& params,
                                           const TrajectoryOptions& options,
                                           std::uint64_t master_seed, std::size_t count,
                                           const ObserverFactory& observers, int threads) {
  std::vector<TrajectoryRecord> records(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto obs = observers ? observers(i) : std::vector<Observer>{};
    records[i] = evolve_trajectory(params, options, derive_seed(master_seed, i), obs);
  });
  return records;
}

}  // namespace mipt

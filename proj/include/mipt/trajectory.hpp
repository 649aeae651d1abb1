// Single quantum-jump trajectories and ensembles of them.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mipt/dynamics.hpp"

namespace mipt {

struct JumpEvent {
  double time{};
  int site{};
};

/// What an observer sees at a sample time. `gamma` is the Majorana covariance
/// of `state`, already computed.
struct Snapshot {
  const CorrelationState& state;
  const RMatrix& gamma;
  long step;
};

using Observation = std::map<std::string, double>;
using Observer = std::function<void(const Snapshot&, Observation&)>;

struct TrajectoryOptions {
  double dt{0.005};
  double t_max{1.0};
  double sample_every{0.1};
  double observe_from{0.0};  // samples before this time are skipped
};

struct TrajectoryRecord {
  ModelParams params;
  std::uint64_t seed{};
  double dt{};
  std::vector<double> sample_times;
  std::map<std::string, std::vector<double>> observables;  // aligned with sample_times
  std::vector<JumpEvent> jumps;
  double expected_jumps{};  // sum over steps of the total jump probability P
  CorrelationState final_state;
};

/// Drift + jump loop from the all-up state. One uniform draw per step from
/// Rng(seed). Errors are rethrown with step index and time attached.
TrajectoryRecord evolve_trajectory(const ModelParams& params, const TrajectoryOptions& options,
                                   std::uint64_t seed, const std::vector<Observer>& observers);

using ObserverFactory = std::function<std::vector<Observer>(std::size_t index)>;

/// `count` trajectories with seeds derive_seed(master_seed, i); records are
/// returned in index order regardless of thread count.
std::vector<TrajectoryRecord> run_ensemble(const ModelParams& params,
                                           const TrajectoryOptions& options,
                                           std::uint64_t master_seed, std::size_t count,
                                           const ObserverFactory& observers, int threads);

}  // namespace mipt

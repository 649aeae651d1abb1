// Standard per-sample observables for trajectories.

#pragma once

#include <cstdint>

#include "mipt/analysis.hpp"
#include "mipt/entanglement.hpp"
#include "mipt/qfi.hpp"
#include "mipt/trajectory.hpp"

namespace mipt {

/// "entropy": S of the requested block (nats).
Observer entropy_observer(EntropyRequest request);

/// "fq_max": maximal QFI density, re-optimized at every sample with
/// seed derive_seed(seed, step).
Observer qfi_observer(AnnealSchedule schedule, int restarts, std::uint64_t seed);

/// "mz": site-averaged <sigma^z>.
Observer magnetization_observer();

/// "lambda_<block>" and "r2_<block>": power-law fit of C~_ell over the window
/// (NaN when the fit is not possible).
Observer decay_observer(Block block, FitWindow window);

}  // namespace mipt

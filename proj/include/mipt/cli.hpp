// Command-line configuration and dispatch.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mipt/io.hpp"

namespace mipt {

enum class Command { NoclickScan, NoclickPoint, Trajectory, Ensemble, Fit, Correlators };

const char* command_name(Command c);

struct RunConfig {
  Command command{Command::NoclickPoint};
  std::vector<int> L{64};
  std::vector<double> h{0.2};
  std::vector<double> gamma{1.0};
  double dt{0.005};
  double t_max{10.0};
  double sample_every{0.5};
  int trajectories{50};
  std::uint64_t seed{1};
  std::string out;     // empty: mipt_<command>.<format>
  std::string format{"csv"};
  int threads{0};      // 0: MIPT_THREADS, then all cores
  int ell{0};          // 0: L/4
  int anneal_restarts{8};
  int anneal_sweeps{50};
  double anneal_cooling{0.98};
  std::vector<std::string> observe{"entropy", "fq_max"};
  double stationary_fraction{0.25};
  double fit_lo{0.0};  // size window for p fits
  double fit_hi{1e9};
  double decay_lo{10.0};  // distance window for lambda fits
  double decay_hi{60.0};
  std::string table{"ctilde"};  // correlators output: ctilde | tensor
  std::string in;        // fit input
  std::string snapshot;  // trajectory: write final (C, F); correlators: read (C, F)
  bool sizes_given{false};

  /// Throws Error(Parameter) naming the offending key.
  void validate() const;
  std::string output_path() const;
};

/// Flags override the key=value file given by --config.
RunConfig parse_config(int argc, const char* const* argv);

json config_to_json(const RunConfig& config);

/// Executes the command; writes the result to config.output_path() and a
/// metadata sidecar <out>.meta.json. Returns the process exit status.
int run(const RunConfig& config, std::ostream& log);

/// parse_config + run with error JSON on stderr: 0 ok, 2 bad configuration,
/// 1 failed computation.
int cli_main(int argc, const char* const* argv);

}  // namespace mipt

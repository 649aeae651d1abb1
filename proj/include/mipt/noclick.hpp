// Stationary state of the no-click trajectory: correlators,
// maximal QFI density, entropy, and the size-scaling exponent p.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mipt/analysis.hpp"
#include "mipt/entanglement.hpp"
#include "mipt/qfi.hpp"

namespace mipt {

struct NoclickOptions {
  AnnealSchedule schedule;
  int restarts{8};
  std::uint64_t seed{1};
  int ell{0};  // entropy subsystem length; 0 means L/4
};

struct NoclickObservables {
  ModelParams params;
  SpinCorrelationTensor tensor;
  QfiResult qfi;
  EntropyRequest subsystem;
  double entropy{};
};

NoclickObservables noclick_observables(const ModelParams& params,
                                       const NoclickOptions& options = {});

/// L = 40, 50, ..., 170.
std::vector<int> default_scan_sizes();
/// L = 16, 24, ..., 64.
std::vector<int> smoke_scan_sizes();

struct ScanSpec {
  std::vector<std::pair<double, double>> grid;  // (h, gamma)
  std::vector<int> sizes{default_scan_sizes()};
  FitWindow window{};
  std::uint64_t seed{1};
  NoclickOptions options;
  int threads{1};

  void validate() const;
};

struct ScanRow {
  double h{}, gamma{}, gamma_over_gc{};
  int L{};
  double fq_max{};  // density F_Q / L
  double entropy{};
};

struct ScanPoint {
  double h{}, gamma{}, gamma_over_gc{};  // gamma_over_gc is NaN for |h| >= 1
  std::vector<ScanRow> rows;
  std::optional<FitResult> p;
  std::string error;  // empty on success
};

/// Per (point, L) seeds are derive_seed(derive_seed(seed, point), L); failures
/// at one point are recorded in ScanPoint::error and the scan continues.
std::vector<ScanPoint> scan_phase_diagram(const ScanSpec& spec);

}  // namespace mipt

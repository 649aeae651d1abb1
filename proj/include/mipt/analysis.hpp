// Least-squares exponent fits and ensemble averages.

#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mipt/spectral_model.hpp"
#include "mipt/trajectory.hpp"

namespace mipt {

struct FitWindow {
  double lo{-std::numeric_limits<double>::infinity()};
  double hi{std::numeric_limits<double>::infinity()};
};

struct FitResult {
  double exponent{};
  double prefactor{};
  double std_error{};
  double r2{};
  FitWindow window;
  int points{};
};

/// values ~ prefactor * sizes^exponent by ordinary least squares in log-log.
/// InsufficientData for fewer than 4 points in the window, Domain error for
/// non-positive values (or sizes) inside it.
FitResult fit_power_law(std::span<const double> sizes, std::span<const double> values,
                        FitWindow window = {});

/// C~_ell ~ ell^(-lambda); returns lambda as the exponent. Default window [10, 60].
FitResult fit_decay_exponent(std::span<const double> ells, std::span<const double> values,
                             FitWindow window = {10.0, 60.0});

/// values ~ prefactor * exp(-exponent * x), least squares on (x, ln v).
FitResult fit_exponential(std::span<const double> x, std::span<const double> values,
                          FitWindow window = {10.0, 60.0});

struct DecayClassification {
  FitResult power_law;    // exponent = lambda
  FitResult exponential;  // exponent = 1 / correlation length
  std::string regime;     // "power-law" or "exponential-like"
};

/// Both fits over the same window; the regime is the one with larger R^2.
DecayClassification classify_decay(std::span<const double> ells, std::span<const double> values,
                                   FitWindow window = {10.0, 60.0});

/// c_ell ~ ell^(-lambda) (a cos(q ell) + b sin(q ell)) with q = pi - k* held
/// fixed. lambda minimizes the relative residual of the linear (a, b) fit to
/// c_ell * ell^lambda; the prefactor is sqrt(a^2 + b^2). InsufficientData if
/// fewer than 4 local extrema of |c_ell| fall in the window.
FitResult fit_xx_ansatz(std::span<const double> ells, std::span<const double> cxx, double kstar,
                        FitWindow window = {10.0, 60.0});

struct ObservableSummary {
  std::vector<double> mean;
  std::vector<double> std_error;
  double stationary_mean{};
  double stationary_error{};
};

struct EnsembleSummary {
  ModelParams params;
  std::size_t trajectories{};
  std::vector<double> sample_times;
  double stationary_from{};  // first sample time in the stationary window
  std::map<std::string, ObservableSummary> observables;
};

/// Pointwise ensemble mean and stderr (sample std / sqrt(N)); stationary
/// values over the last `stationary_fraction` of the sample times.
EnsembleSummary ensemble_summary(std::span<const TrajectoryRecord> records,
                                 double stationary_fraction = 0.25);

}  // namespace mipt

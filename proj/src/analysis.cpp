#include "mipt/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mipt/errors.hpp"

namespace mipt {

namespace {

struct LineFit {
  double slope{}, intercept{}, slope_error{}, r2{};
  int n{};
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::InsufficientData, "fit abscissae are all identical");
  LineFit f;
  f.n = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
  }
  f.slope_error = x.size() > 2 ? std::sqrt(std::max(0.0, ssr / (n - 2.0) / sxx)) : 0.0;
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

void select(std::span<const double> x, std::span<const double> y, FitWindow w,
            std::vector<double>& xs, std::vector<double>& ys) {
  require(x.size() == y.size(), ErrorKind::Contract, "fit inputs differ in length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= w.lo && x[i] <= w.hi) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  require(xs.size() >= 4, ErrorKind::InsufficientData,
          "need at least 4 points in the fit window (have " + std::to_string(xs.size()) + ")");
}

FitWindow span_of(const std::vector<double>& xs) {
  return {*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end())};
}

}  // namespace

FitResult fit_power_law(std::span<const double> sizes, std::span<const double> values,
                        FitWindow window) {
  std::vector<double> xs, ys;
  select(sizes, values, window, xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] > 0.0 && ys[i] > 0.0, ErrorKind::Domain,
            "power-law fit needs positive data (value " + std::to_string(ys[i]) + " at " +
                std::to_string(xs[i]) + ")");
  }
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const LineFit f = ols(lx, ly);
  return {f.slope, std::exp(f.intercept), f.slope_error, f.r2, span_of(xs), f.n};
}

FitResult fit_decay_exponent(std::span<const double> ells, std::span<const double> values,
                             FitWindow window) {
  FitResult r = fit_power_law(ells, values, window);
  r.exponent = -r.exponent;
  return r;
}

FitResult fit_exponential(std::span<const double> x, std::span<const double> values,
                          FitWindow window) {
  std::vector<double> xs, ys;
  select(x, values, window, xs, ys);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    require(ys[i] > 0.0, ErrorKind::Domain, "exponential fit needs positive data");
    ys[i] = std::log(ys[i]);
  }
  const LineFit f = ols(xs, ys);
  return {-f.slope, std::exp(f.intercept), f.slope_error, f.r2, span_of(xs), f.n};
}

DecayClassification classify_decay(std::span<const double> ells, std::span<const double> values,
                                   FitWindow window) {
  DecayClassification c;
  c.power_law = fit_decay_exponent(ells, values, window);
  c.exponential = fit_exponential(ells, values, window);
  c.regime = c.exponential.r2 > c.power_law.r2 ? "exponential-like" : "power-law";
  return c;
}

FitResult fit_xx_ansatz(std::span<const double> ells, std::span<const double> cxx, double kstar,
                        FitWindow window) {
  require(std::isfinite(kstar), ErrorKind::Domain, "k* must be finite (|h| < 1)");
  std::vector<double> xs, ys;
  require(ells.size() == cxx.size(), ErrorKind::Contract, "fit inputs differ in length");
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (ells[i] >= window.lo && ells[i] <= window.hi) {
      require(ells[i] > 0.0, ErrorKind::Domain, "distances must be positive");
      xs.push_back(ells[i]);
      ys.push_back(cxx[i]);
    }
  }
  int extrema = 0;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    const double a = std::abs(ys[i]);
    if (a > 0.0 && a >= std::abs(ys[i - 1]) && a >= std::abs(ys[i + 1])) ++extrema;
  }
  require(extrema >= 4, ErrorKind::InsufficientData,
          "fewer than 4 oscillation extrema in the fit window (found " + std::to_string(extrema) +
              ")");

  const double q = std::numbers::pi - kstar;
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd basis(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    basis(i, 0) = std::cos(q * xs[static_cast<std::size_t>(i)]);
    basis(i, 1) = std::sin(q * xs[static_cast<std::size_t>(i)]);
  }
  const auto qr = basis.colPivHouseholderQr();

  struct Eval {
    double loss;
    Eigen::Vector2d coef;
    double rss;
  };
  auto evaluate = [&](double lambda) {
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      y(i) = ys[k] * std::pow(xs[k], lambda);
    }
    const Eigen::Vector2d coef = qr.solve(y);
    const double rss = (y - basis * coef).squaredNorm();
    const double tss = y.squaredNorm();
    return Eval{tss > 0.0 ? rss / tss : 1.0, coef, rss};
  };

  // Coarse scan for the basin, then golden-section refinement.
  double best_lambda = 0.0, best_loss = std::numeric_limits<double>::infinity();
  const double lo_scan = -1.0, hi_scan = 4.0, step = 0.01;
  for (double lam = lo_scan; lam <= hi_scan + 1e-12; lam += step) {
    const double loss = evaluate(lam).loss;
    if (loss < best_loss) {
      best_loss = loss;
      best_lambda = lam;
    }
  }
  double a = best_lambda - step, b = best_lambda + step;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = evaluate(c).loss, fd = evaluate(d).loss;
  for (int it = 0; it < 100 && b - a > 1e-10; ++it) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - phi * (b - a);
      fc = evaluate(c).loss;
    } else {
      a = c, c = d, fc = fd;
      d = a + phi * (b - a);
      fd = evaluate(d).loss;
    }
  }
  const double lambda = 0.5 * (a + b);
  const Eval best = evaluate(lambda);

  // Linearized standard error of lambda from the weighted residual model.
  Eigen::MatrixXd jac(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    jac(i, 0) = ys[k] * std::pow(xs[k], lambda) * std::log(xs[k]);
    jac(i, 1) = -basis(i, 0);
    jac(i, 2) = -basis(i, 1);
  }
  double stderr_lambda = 0.0;
  if (n > 3) {
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const double s2 = best.rss / static_cast<double>(n - 3);
    const Eigen::Matrix3d cov = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
    stderr_lambda = std::sqrt(std::max(0.0, cov(0, 0)));
  }

  FitResult r;
  r.exponent = lambda;
  r.prefactor = best.coef.norm();
  r.std_error = stderr_lambda;
  r.r2 = 1.0 - best.loss;
  r.window = span_of(xs);
  r.points = static_cast<int>(n);
  return r;
}

EnsembleSummary ensemble_summary(std::span<const TrajectoryRecord> records,
                                 double stationary_fraction) {
  require(!records.empty(), ErrorKind::InsufficientData, "ensemble_summary: no records");
  require(stationary_fraction > 0.0 && stationary_fraction <= 1.0, ErrorKind::Parameter,
          "stationary fraction must lie in (0, 1]");
  const TrajectoryRecord& first = records.front();
  for (const auto& rec : records) {
    require(rec.params.L == first.params.L && rec.params.h == first.params.h &&
                rec.params.gamma == first.params.gamma,
            ErrorKind::Contract, "ensemble_summary: records have different parameters");
    require(rec.sample_times.size() == first.sample_times.size(), ErrorKind::Contract,
            "ensemble_summary: records have different sample grids");
    for (std::size_t k = 0; k < rec.sample_times.size(); ++k) {
      require(std::abs(rec.sample_times[k] - first.sample_times[k]) < 1e-9, ErrorKind::Contract,
              "ensemble_summary: records have different sample grids");
    }
    require(rec.observables.size() == first.observables.size(), ErrorKind::Contract,
            "ensemble_summary: records have different observables");
  }

  EnsembleSummary s;
  s.params = first.params;
  s.trajectories = records.size();
  s.sample_times = first.sample_times;
  const std::size_t n_samples = s.sample_times.size();
  require(n_samples > 0, ErrorKind::InsufficientData, "ensemble_summary: no samples");
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(stationary_fraction * static_cast<double>(n_samples))));
  const std::size_t k0 = n_samples - std::min(window, n_samples);
  s.stationary_from = s.sample_times[k0];
  const auto N = static_cast<double>(records.size());

  for (const auto& [key, unused] : first.observables) {
    ObservableSummary o;
    o.mean.assign(n_samples, 0.0);
    o.std_error.assign(n_samples, 0.0);
    std::vector<const std::vector<double>*> series;
    for (const auto& rec : records) {
      const auto it = rec.observables.find(key);
      require(it != rec.observables.end(), ErrorKind::Contract,
              "ensemble_summary: observable '" + key + "' missing from a record");
      series.push_back(&it->second);
    }
    for (std::size_t k = 0; k < n_samples; ++k) {
      double sum = 0.0;
      for (const auto* v : series) sum += (*v)[k];
      const double mean = sum / N;
      double var = 0.0;
      for (const auto* v : series) var += ((*v)[k] - mean) * ((*v)[k] - mean);
      o.mean[k] = mean;
      o.std_error[k] = records.size() > 1 ? std::sqrt(var / (N - 1.0) / N) : 0.0;
    }
    std::vector<double> time_avg;
    for (const auto* v : series) {
      double sum = 0.0;
      for (std::size_t k = k0; k < n_samples; ++k) sum += (*v)[k];
      time_avg.push_back(sum / static_cast<double>(n_samples - k0));
    }
    double mean = 0.0;
    for (double t : time_avg) mean += t;
    mean /= N;
    double var = 0.0;
    for (double t : time_avg) var += (t - mean) * (t - mean);
    o.stationary_mean = mean;
    o.stationary_error = records.size() > 1 ? std::sqrt(var / (N - 1.0) / N) : 0.0;
    s.observables.emplace(key, std::move(o));
  }
  return s;
}

}  // namespace mipt

#include "mipt/qfi.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <algorithm>
#include <array>
#include <limits>
#include <numbers>

#include "mipt/errors.hpp"
#include "mipt/parallel.hpp"
#include "mipt/rng.hpp"

namespace mipt {

using Eigen::Matrix3d;
using Eigen::Vector3d;

DirectionField DirectionField::uniform(int L, const Vector3d& dir) {
  DirectionField f;
  f.n.assign(static_cast<std::size_t>(L), dir.normalized());
  return f;
}

void DirectionField::validate() const {
  for (std::size_t j = 0; j < n.size(); ++j) {
    require(std::abs(n[j].norm() - 1.0) <= 1e-12, ErrorKind::Contract,
            "direction " + std::to_string(j) + " is not a unit vector");
  }
}

Eigen::VectorXd DirectionField::flat() const {
  Eigen::VectorXd v(3 * n.size());
  for (std::size_t j = 0; j < n.size(); ++j) v.segment<3>(3 * static_cast<Eigen::Index>(j)) = n[j];
  return v;
}

DirectionField DirectionField::from_flat(const Eigen::VectorXd& v) {
  DirectionField f;
  for (Eigen::Index j = 0; j < v.size() / 3; ++j) f.n.push_back(v.segment<3>(3 * j));
  return f;
}

RMatrix qfi_matrix(const SpinCorrelationTensor& t) {
  const int L = t.L;
  const std::array<Spin, 3> comps{Spin::X, Spin::Y, Spin::Z};
  RMatrix re(3 * L, 3 * L), im(3 * L, 3 * L);
  for (int i = 0; i < L; ++i) {
    for (int a = 0; a < 3; ++a) {
      for (int j = 0; j < L; ++j) {
        for (int b = 0; b < 3; ++b) {
          const cplx c = t.value(comps[a], comps[b], i, j);
          re(3 * i + a, 3 * j + b) = c.real();
          im(3 * i + a, 3 * j + b) = c.imag();
        }
      }
    }
  }
  // n^T Im n only sees the symmetric part of Im.
  const double residual = (0.5 * (im + im.transpose())).cwiseAbs().maxCoeff();
  require(residual <= 1e-6, ErrorKind::Numerical,
          "corrupted correlation tensor: imaginary part of the QFI form does not cancel (" +
              std::to_string(residual) + ")");
  return 0.5 * (re + re.transpose());
}

double qfi_form(const SpinCorrelationTensor& t, const DirectionField& dirs) {
  require(dirs.L() == t.L, ErrorKind::Contract, "qfi_form: direction field and tensor differ in L");
  dirs.validate();
  const int L = t.L;
  Eigen::VectorXd x(L), y(L), z(L);
  for (int j = 0; j < L; ++j) {
    x(j) = dirs.n[j].x();
    y(j) = dirs.n[j].y();
    z(j) = dirs.n[j].z();
  }
  const Eigen::VectorXcd xc = x.cast<cplx>(), yc = y.cast<cplx>(), zc = z.cast<cplx>();
  const cplx xy_part = xc.dot(t.xx * xc) + xc.dot(t.xy * yc) + yc.dot(t.yx * xc) + yc.dot(t.yy * yc);
  const cplx z_part = zc.dot(t.zz * zc);
  const cplx total = xy_part + z_part;
  require(std::abs(total.imag()) <= 1e-6 * std::max(1.0, std::abs(total.real())),
          ErrorKind::Numerical,
          "corrupted correlation tensor: QFI form has imaginary part " +
              std::to_string(total.imag()));
  return total.real();
}

double classical_energy(const SpinCorrelationTensor& t, const DirectionField& dirs) {
  return -qfi_form(t, dirs);
}

namespace {

Vector3d random_unit(Rng& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// Rotate n by a random angle in [0, max_angle] about a random axis orthogonal to n.
Vector3d cone_perturb(const Vector3d& n, double max_angle, Rng& rng) {
  Vector3d helper = std::abs(n.x()) < 0.9 ? Vector3d::UnitX() : Vector3d::UnitY();
  const Vector3d e1 = n.cross(helper).normalized();
  const Vector3d e2 = n.cross(e1);
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double theta = max_angle * rng.uniform();
  const Vector3d axis = std::cos(phi) * e1 + std::sin(phi) * e2;
  return (std::cos(theta) * n + std::sin(theta) * axis).normalized();
}

// argmax over |m| = 1 of m^T A m + 2 b^T m for symmetric 3x3 A.
Vector3d maximize_on_sphere(const Matrix3d& a, const Vector3d& b, const Vector3d& current) {
  const Eigen::SelfAdjointEigenSolver<Matrix3d> es(a);
  const Vector3d lam = es.eigenvalues();  // ascending
  const Matrix3d v = es.eigenvectors();
  const Vector3d bt = v.transpose() * b;
  const double bnorm = b.norm();
  const double lmax = lam(2);
  const double scale = std::max({1.0, std::abs(lmax), bnorm});

  std::array<bool, 3> top{};
  double top_weight = 0.0;
  for (int k = 0; k < 3; ++k) {
    top[k] = lam(k) >= lmax - 1e-12 * scale;
    if (top[k]) top_weight += bt(k) * bt(k);
  }

  auto secular = [&](double mu) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += bt(k) * bt(k) / ((mu - lam(k)) * (mu - lam(k)));
    return s;
  };

  Vector3d c;
  if (bnorm < 1e-14 * scale) {
    c = Vector3d::Zero();
    c(2) = 1.0;
    Vector3d m = v * c;
    return m.dot(current) < 0.0 ? Vector3d(-m) : m;
  }
  bool hard = false;
  if (top_weight <= 1e-24 * scale * scale) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (!top[k]) s += bt(k) * bt(k) / ((lmax - lam(k)) * (lmax - lam(k)));
    }
    if (s < 1.0) {
      hard = true;
      c = Vector3d::Zero();
      for (int k = 0; k < 3; ++k) {
        if (!top[k]) c(k) = bt(k) / (lmax - lam(k));
      }
      c(2) = std::sqrt(1.0 - s);
      Vector3d m = (v * c).normalized();
      Vector3d alt = c;
      alt(2) = -alt(2);
      const Vector3d m2 = (v * alt).normalized();
      return m2.dot(current) > m.dot(current) ? m2 : m;
    }
  }
  if (!hard) {
    double lo = lmax, hi = lmax + bnorm;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * scale; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lmax || secular(mid) > 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double mu = hi;
    for (int k = 0; k < 3; ++k) c(k) = bt(k) / (mu - lam(k));
  }
  return (v * c).normalized();
}

struct RestartOutcome {
  double value{-std::numeric_limits<double>::infinity()};
  Eigen::VectorXd dirs;
  long best_step{};
  long accepted{};
  long proposed{};
  double t0{};
};

class Annealer {
 public:
  Annealer(const RMatrix& q, const AnnealSchedule& schedule)
      : q_(q), L_(static_cast<int>(q.rows() / 3)), schedule_(schedule) {}

  RestartOutcome run(std::uint64_t seed) const {
    Rng rng(seed);
    RestartOutcome out;
    Eigen::VectorXd n(3 * L_);
    for (int j = 0; j < L_; ++j) n.segment<3>(3 * j) = random_unit(rng);
    Eigen::VectorXd g = q_ * n;
    double value = n.dot(g);

    out.t0 = calibrate(n, g, rng);
    double temp = out.t0;
    out.value = value;
    out.dirs = n;
    out.best_step = 0;

    const long sweeps = static_cast<long>(schedule_.sweeps_per_site) * L_;
    for (long sweep = 1; sweep <= sweeps; ++sweep) {
      for (int move = 0; move < L_; ++move) {
        const int i = static_cast<int>(rng.next() % static_cast<std::uint64_t>(L_));
        const Vector3d old = n.segment<3>(3 * i);
        const Vector3d proposal = propose(old, rng);
        const double delta = gain(i, old, proposal, g);
        ++out.proposed;
        // Energy is -F_Q, so a gain lowers the energy.
        const bool accept =
            delta >= 0.0 || (temp > 0.0 && rng.uniform() < std::exp(delta / temp));
        if (!accept) continue;
        ++out.accepted;
        const Vector3d diff = proposal - old;
        n.segment<3>(3 * i) = proposal;
        g.noalias() += q_.middleCols<3>(3 * i) * diff;
        value += delta;
        if (value > out.value) {
          out.value = value;
          out.dirs = n;
          out.best_step = sweep;
        }
      }
      temp *= schedule_.cooling;
      // Full recomputation contains the drift of the incremental updates.
      g.noalias() = q_ * n;
      value = n.dot(g);
      if (value > out.value) {
        out.value = value;
        out.dirs = n;
        out.best_step = sweep;
      }
    }

    if (schedule_.polish) {
      Eigen::VectorXd m = out.dirs;
      const double polished = polish(m);
      if (polished > out.value) {
        out.value = polished;
        out.dirs = m;
        out.best_step = sweeps + 1;
      }
    }
    return out;
  }

 private:
  Vector3d propose(const Vector3d& old, Rng& rng) const {
    if (rng.uniform() < schedule_.uniform_move_probability) return random_unit(rng);
    return cone_perturb(old, schedule_.cone_angle, rng);
  }

  // F(new) - F(old) for a single-site change at i, given fields g = Q n.
  double gain(int i, const Vector3d& old, const Vector3d& next, const Eigen::VectorXd& g) const {
    const Matrix3d a = q_.block<3, 3>(3 * i, 3 * i);
    const Vector3d rest = g.segment<3>(3 * i) - a * old;
    return 2.0 * rest.dot(next - old) + next.dot(a * next) - old.dot(a * old);
  }

  double calibrate(const Eigen::VectorXd& n, const Eigen::VectorXd& g, Rng& rng) const {
    const int moves = std::max(2, schedule_.calibration_moves);
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < moves; ++k) {
      const int i = static_cast<int>(rng.next() % static_cast<std::uint64_t>(L_));
      const Vector3d old = n.segment<3>(3 * i);
      const double d = gain(i, old, random_unit(rng), g);
      sum += d;
      sum2 += d * d;
    }
    const double mean = sum / moves;
    return std::sqrt(std::max(0.0, sum2 / moves - mean * mean));
  }

  double polish(Eigen::VectorXd& n) const {
    Eigen::VectorXd g = q_ * n;
    double value = n.dot(g);
    for (int sweep = 0; sweep < 1000; ++sweep) {
      for (int i = 0; i < L_; ++i) {
        const Matrix3d a = q_.block<3, 3>(3 * i, 3 * i);
        const Vector3d old = n.segment<3>(3 * i);
        const Vector3d b = g.segment<3>(3 * i) - a * old;
        const Vector3d next = maximize_on_sphere(a, b, old);
        if (gain(i, old, next, g) <= 0.0) continue;
        n.segment<3>(3 * i) = next;
        g.noalias() += q_.middleCols<3>(3 * i) * (next - old);
      }
      g.noalias() = q_ * n;
      const double updated = n.dot(g);
      const bool done = updated - value <= 1e-13 * std::max(1.0, std::abs(updated));
      value = std::max(value, updated);
      if (done) break;
    }
    return value;
  }

  const RMatrix& q_;
  int L_;
  AnnealSchedule schedule_;
};

}  // namespace

QfiResult maximize_quadratic_form(const RMatrix& q, const AnnealSchedule& schedule, int restarts,
                                  std::uint64_t seed) {
  require(q.rows() == q.cols() && q.rows() % 3 == 0 && q.rows() > 0, ErrorKind::Contract,
          "quadratic form must be 3L x 3L");
  require(restarts >= 1, ErrorKind::Parameter, "anneal restarts must be >= 1");
  require(schedule.cooling > 0.0 && schedule.cooling < 1.0, ErrorKind::Parameter,
          "cooling factor must lie in (0, 1)");
  require(schedule.sweeps_per_site >= 1, ErrorKind::Parameter, "sweeps per site must be >= 1");
  const int L = static_cast<int>(q.rows() / 3);
  const Annealer annealer(q, schedule);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  parallel_for(outcomes.size(), schedule.threads, [&](std::size_t r) {
    outcomes[r] = annealer.run(derive_seed(seed, r));
  });

  std::size_t best = 0;
  long accepted = 0, proposed = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    accepted += outcomes[r].accepted;
    proposed += outcomes[r].proposed;
    if (outcomes[r].value > outcomes[best].value) best = r;
  }

  QfiResult res;
  res.directions = DirectionField::from_flat(outcomes[best].dirs);
  // Report the value of the returned field from scratch.
  const Eigen::VectorXd n = outcomes[best].dirs;
  res.fq = n.dot(q * n);
  res.fq_density = res.fq / L;
  res.diagnostics.restarts = restarts;
  res.diagnostics.accepted_fraction =
      proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  res.diagnostics.best_restart = static_cast<int>(best);
  res.diagnostics.best_step = outcomes[best].best_step;
  res.diagnostics.initial_temperature = outcomes[best].t0;
  return res;
}

QfiResult maximize_qfi(const SpinCorrelationTensor& tensor, const AnnealSchedule& schedule,
                       int restarts, std::uint64_t seed) {
  return maximize_quadratic_form(qfi_matrix(tensor), schedule, restarts, seed);
}

double brute_force_max(const SpinCorrelationTensor& tensor, double resolution, int random_starts,
                       std::uint64_t seed) {
  const int L = tensor.L;
  require(L <= 8, ErrorKind::Refusal, "brute_force_max is limited to L <= 8");
  require(resolution > 0.0 && resolution <= std::numbers::pi, ErrorKind::Parameter,
          "angular resolution must lie in (0, pi]");
  const RMatrix q = qfi_matrix(tensor);
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(q, Eigen::EigenvaluesOnly);
  const double sigma = std::max(0.0, -es.eigenvalues()(0));
  const RMatrix shifted = q + sigma * RMatrix::Identity(q.rows(), q.cols());

  auto ascend = [&](Eigen::VectorXd n) {
    double value = n.dot(q * n);
    for (int it = 0; it < 5000; ++it) {
      Eigen::VectorXd g = shifted * n;
      for (int j = 0; j < L; ++j) {
        const double norm = g.segment<3>(3 * j).norm();
        if (norm > 0.0) n.segment<3>(3 * j) = g.segment<3>(3 * j) / norm;
      }
      const double next = n.dot(q * n);
      const bool done = next - value <= 1e-15 * std::max(1.0, std::abs(next));
      value = std::max(value, next);
      if (done) break;
    }
    return value;
  };

  double best = -std::numeric_limits<double>::infinity();
  const int n_theta = static_cast<int>(std::floor(std::numbers::pi / resolution + 1e-9));
  const int n_phi = std::max(1, static_cast<int>(std::floor(2.0 * std::numbers::pi / resolution + 1e-9)));
  for (int it = 0; it <= n_theta; ++it) {
    const double theta = it * resolution;
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = ip * resolution;
      const Vector3d d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta));
      Eigen::VectorXd uni(3 * L), stag(3 * L);
      for (int j = 0; j < L; ++j) {
        uni.segment<3>(3 * j) = d;
        stag.segment<3>(3 * j) = (j % 2 == 0 ? 1.0 : -1.0) * d;
      }
      best = std::max({best, ascend(uni), ascend(stag)});
    }
  }
  Rng rng(seed);
  for (int s = 0; s < random_starts; ++s) {
    Eigen::VectorXd n(3 * L);
    for (int j = 0; j < L; ++j) n.segment<3>(3 * j) = random_unit(rng);
    best = std::max(best, ascend(n));
  }
  return best;
}

}  // namespace mipt

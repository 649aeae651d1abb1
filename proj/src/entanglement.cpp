#include "mipt/entanglement.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mipt/errors.hpp"

namespace mipt {

EntropyRequest default_entropy_request(int L) { return {0, std::max(1, L / 4)}; }

Eigen::VectorXd restricted_spectrum(const RMatrix& gamma, const EntropyRequest& req) {
  const int L = static_cast<int>(gamma.rows() / 2);
  require(gamma.rows() == gamma.cols() && gamma.rows() == 2 * L, ErrorKind::Contract,
          "covariance must be square with even dimension");
  require(req.length >= 1 && req.length <= L - 1, ErrorKind::Parameter,
          "subsystem length must satisfy 1 <= ell <= L-1");
  require(req.start >= 0 && req.start < L, ErrorKind::Parameter, "subsystem start out of range");

  const int ell = req.length;
  std::vector<int> idx;
  idx.reserve(2 * static_cast<std::size_t>(ell));
  for (int s = 0; s < ell; ++s) idx.push_back((req.start + s) % L);
  for (int s = 0; s < ell; ++s) idx.push_back(L + (req.start + s) % L);

  CMatrix h(2 * ell, 2 * ell);
  for (int p = 0; p < 2 * ell; ++p) {
    for (int q = 0; q < 2 * ell; ++q) {
      h(p, q) = cplx(0.0, 0.5 * (gamma(idx[p], idx[q]) - gamma(idx[q], idx[p])));
    }
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorKind::Numerical,
          "eigen-decomposition of the restricted covariance failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending, pairs +-mu

  Eigen::VectorXd mu(ell);
  for (int r = 0; r < ell; ++r) {
    const double lo = ev(ell - 1 - r), hi = ev(ell + r);
    require(std::abs(lo + hi) < 1e-6, ErrorKind::Numerical,
            "restricted covariance spectrum is not +-paired");
    double m = 0.5 * (hi - lo);
    require(m <= 1.0 + 1e-6, ErrorKind::Numerical,
            "corrupted covariance: eigenvalue |mu| = " + std::to_string(m) + " > 1");
    mu(r) = std::clamp(m, 0.0, 1.0);
  }
  std::sort(mu.begin(), mu.end());
  return mu;
}

double entanglement_entropy(const RMatrix& gamma, const EntropyRequest& req, bool check_purity) {
  if (check_purity) {
    const double defect = purity_defect(gamma);
    require(defect < 1e-6, ErrorKind::Numerical,
            "entanglement_entropy: state is not pure (|Gamma^2 + 1| = " + std::to_string(defect) +
                ")");
  }
  const Eigen::VectorXd mu = restricted_spectrum(gamma, req);
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  double s = 0.0;
  for (double m : mu) s -= xlogx(0.5 * (1.0 + m)) + xlogx(0.5 * (1.0 - m));
  return s;
}

double entanglement_entropy(const CorrelationState& state, const EntropyRequest& req) {
  return entanglement_entropy(majorana_covariance(state), req);
}

double entanglement_entropy(const MajoranaBlocks& blocks, const EntropyRequest& req) {
  return entanglement_entropy(covariance_from_blocks(blocks), req);
}

}  // namespace mipt

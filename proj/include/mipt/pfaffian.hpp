// Pfaffian of an even-dimensional antisymmetric matrix.
//
// Parlett-Reid elimination with partial pivoting: at step k the largest
// entry of column k below the diagonal is swapped into position (k+1, k),
// then a skew rank-2 update eliminates rows/columns k, k+1. O(n^3).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "mipt/errors.hpp"

namespace mipt {

/// Largest |A + A^T| entry; zero for exactly antisymmetric input.
template <class Derived>
double antisymmetry_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return 0.0;
  return (a + a.transpose()).cwiseAbs().maxCoeff();
}

/// Pfaffian of a square antisymmetric matrix taken by value (it is overwritten).
/// Contract error for odd dimension or antisymmetry defect above `tolerance`.
template <class Scalar>
Scalar pfaffian(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                double tolerance = 1e-8) {
  const Eigen::Index n = a.rows();
  require(a.cols() == n, ErrorKind::Contract, "pfaffian: matrix must be square");
  require(n % 2 == 0, ErrorKind::Contract,
          "pfaffian: dimension must be even (got " + std::to_string(n) + ")");
  if (n == 0) return Scalar(1);
  require(antisymmetry_defect(a) <= tolerance * std::max(1.0, a.cwiseAbs().maxCoeff()),
          ErrorKind::Contract, "pfaffian: matrix is not antisymmetric");

  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index rel = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&rel);
    const Eigen::Index kp = k + 1 + rel;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    const Scalar pivot = a(k, k + 1);
    if (pivot == Scalar(0)) return Scalar(0);
    pf *= pivot;
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = a.row(k).tail(rest).transpose() / pivot;
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest).noalias() += tau * col.transpose();
      a.bottomRightCorner(rest, rest).noalias() -= col * tau.transpose();
    }
  }
  return pf;
}

template <class Derived>
auto pfaffian_of(const Eigen::MatrixBase<Derived>& a, double tolerance = 1e-8) {
  using Scalar = typename Derived::Scalar;
  return pfaffian<Scalar>(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(a), tolerance);
}

}  // namespace mipt

// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense complex linear algebra used by every other module. Matrices are plain
// Eigen objects; the free functions accept any dense expression.

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "pindex/error.hpp"

namespace pindex {

using Complex = std::complex<double>;
using ComplexDense = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kResTol = 1e-10;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Eigensystem {
  ComplexVector values;
  ComplexDense vectors;  // unit 2-norm columns
};

struct SVDTriple {
  ComplexDense U;
  RealVector singulars;  // nonincreasing
  ComplexDense V;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
  return m.allFinite();
}

/// Throws InvalidInput unless every entry is finite.
void require_finite(const ComplexDense &m, const char *what);
void require_square(const ComplexDense &m, const char *what);

Eigensystem eig(const ComplexDense &m);
/// Eigenvalues only. Real-valued input goes through the real Schur form.
ComplexVector eigenvalues(const ComplexDense &m);

SVDTriple svd(const ComplexDense &m);

template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived> &m) {
  using Plain = typename Derived::PlainObject;
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<Plain> dec(m.eval());
  return dec.singularValues().template cast<double>();
}

template <typename Derived>
double opnorm(const Eigen::MatrixBase<Derived> &m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

template <typename Derived>
double sigma_min(const Eigen::MatrixBase<Derived> &m) {
  if (m.size() == 0) return 0.0;
  const RealVector s = singular_values(m);
  return s(s.size() - 1);
}

/// opnorm / sigma_min, +inf for singular input.
template <typename Derived>
double cond(const Eigen::MatrixBase<Derived> &m) {
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidInput, "cond requires a square matrix");
  if (m.size() == 0) return 1.0;
  const RealVector s = singular_values(m);
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : kInf;
}

/// X with M X = B. SingularMatrix when the smallest LU pivot is at most
/// `singular_tol` times the largest, or when the solution is not finite.
ComplexDense solve(const ComplexDense &m, const ComplexDense &b, double singular_tol = 0.0);

/// cond of the unit-column eigenvector matrix: an upper estimate of the
/// eigenvector condition number kappa_V. +inf for (numerically) defective input.
double kappaV_estimate(const ComplexDense &m);
double kappaV_estimate(const Eigensystem &es);

/// Eigenvalue condition numbers ||v_i w_i^*|| with w_i^* v_i = 1. Returns an
/// empty vector when the eigenvector matrix is numerically singular.
RealVector eigenvalue_condition_numbers(const Eigensystem &es);

bool is_hermitian(const ComplexDense &m, double rel_tol = kHermTol);

ComplexDense hermitian_sqrt(const ComplexDense &q);
ComplexDense hermitian_inv_sqrt(const ComplexDense &q);

/// ||W^{1/2} M W^{-1/2}||.
double weighted_opnorm(const ComplexDense &m, const ComplexDense &w);
/// sigma_min(W^{1/2} M W^{-1/2}).
double weighted_sigma_min(const ComplexDense &m, const ComplexDense &w);

/// Smallest eigenvalue of the Hermitian part; used for semidefiniteness checks.
double min_hermitian_eigenvalue(const ComplexDense &m);

}  // namespace pindex

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>

#include "pindex/numkernel.hpp"

namespace pindex {

/// The regular pencil lambda*E - A.
struct Pencil {
  ComplexDense E;
  ComplexDense A;

  Pencil() = default;
  Pencil(ComplexDense e, ComplexDense a);

  Eigen::Index size() const { return E.rows(); }
  Pencil scaled(double s) const { return Pencil(s * E, s * A); }
};

/// Dissipative Hamiltonian pencil lambda*E - (J - R)Q.
struct PHPencil {
  ComplexDense E;
  ComplexDense J;
  ComplexDense R;
  ComplexDense Q;

  Eigen::Index size() const { return E.rows(); }
  /// (E, (J - R) Q).
  Pencil as_pencil() const;
};

struct PHCheck {
  bool jSkew = false;
  bool rSemidefinite = false;
  bool qeSemidefinite = false;
  bool ok() const { return jSkew && rSemidefinite && qeSemidefinite; }
};

/// J + J^* = 0, R >= 0 and Q^*E >= 0, each relative to the matrix norm.
PHCheck check_ph(const PHPencil &ph, double tol = kHermTol);

/// Unitary basis split into (ran E, ker E) and the blocks of U^* A U.
struct BlockForm {
  ComplexDense U;
  Eigen::Index n1 = 0;
  ComplexDense E11;  // diagonal, descending
  ComplexDense A11;
  ComplexDense A12;
  ComplexDense A21;
  ComplexDense A22;
  double rankTol = 0.0;

  Eigen::Index size() const { return U.rows(); }
  /// U [E11 0; 0 0] U^*,  U [A11 A12; A21 A22] U^*.
  Pencil reassemble() const;
};

enum class StructureVerdict { Index2Candidate, SimpleInfinityBlocksPresent, NotApplicable };
std::string to_string(StructureVerdict v);

struct StructureReport {
  double a22Norm = 0.0;
  bool a12FullColumnRank = false;
  bool a21FullRowRank = false;
  double e11SigmaMin = 0.0;
  bool n1LessThanN = false;
  double tol = 0.0;
  StructureVerdict verdict = StructureVerdict::NotApplicable;
};

/// n * eps * ||E||.
double default_rank_tol(const ComplexDense &e);

BlockForm project_blocks(const Pencil &p, std::optional<double> rank_tol = std::nullopt);

/// `tol` defaults to 1e-10 * ||A||.
StructureReport check_index2_structure(const BlockForm &b, std::optional<double> tol = std::nullopt);

/// Largest tau on the (strictly descending) grid such that some eigenvalue mu of
/// lambda(E + tau I) - A has |mu| > ||A11|| / (tau + sigma_min(E11)/2), refined by
/// bisection in log(tau) against the next larger grid point. +inf when A11
/// vanishes, 0 when no grid point qualifies. If the largest grid point already
/// qualifies it is returned as is.
double tau0_estimate(const Pencil &p, const BlockForm &b, std::span<const double> grid_descending);

/// (E - hA)^{-1} (E + hA).
ComplexDense cayley(const Pencil &p, double h);

struct CayleyResult {
  ComplexDense Mh;
  double h = 1.0;
};

/// Tries h, h/2, ..., h/2^20 until E - hA is numerically nonsingular.
CayleyResult cayley_with_fallback(const Pencil &p, double h = 1.0);

/// (Mh + I) / ||Mh + I||.
ComplexDense normalize_for_ginibre(const ComplexDense &mh);

struct IdentityQForm {
  PHPencil ph;      // Q = I
  ComplexDense T;   // Q^{-1/2}
  Pencil pencil() const { return ph.as_pencil(); }
};

/// Similarity T^{-1} (.) T with T = Q^{-1/2}: the result has Q = I.
IdentityQForm ph_to_identityQ(const PHPencil &ph);

/// Reversal of the shifted pencil, lambda (A - lambda0 E) - E. An eigenvalue mu of a
/// perturbation of the result corresponds to lambda0 + 1/mu of the original.
Pencil shift_for_finite_eig(const Pencil &p, Complex lambda0);

/// U V^* from the SVD of E.
ComplexDense uv_direction(const ComplexDense &e);

/// 1 / max |mu_i| over the eigenvalues of (E + tau I)^{-1} A, i.e. the smallest
/// modulus among the eigenvalues of the reversal pencil lambda A - (E + tau I).
double min_abs_eig_reversal(const Pencil &p, double tau);

}  // namespace pindex

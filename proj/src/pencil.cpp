// SPDX-License-Identifier: Apache-2.0

#include "pindex/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pindex {

Pencil::Pencil(ComplexDense e, ComplexDense a) : E(std::move(e)), A(std::move(a)) {
  require_square(E, "pencil E");
  require_square(A, "pencil A");
  if (E.rows() != A.rows()) fail(ErrorKind::InvalidInput, "pencil: E and A differ in dimension");
  require_finite(E, "pencil E");
  require_finite(A, "pencil A");
}

Pencil PHPencil::as_pencil() const { return Pencil(E, (J - R) * Q); }

PHCheck check_ph(const PHPencil &ph, double tol) {
  PHCheck c;
  const ComplexDense skew_sum = ph.J + ph.J.adjoint();
  c.jSkew = skew_sum.isZero(0.0) || opnorm(skew_sum) <= tol * opnorm(ph.J);

  auto semidefinite = [tol](const ComplexDense &m) {
    if (m.isZero(0.0)) return true;
    if (!is_hermitian(m, tol)) return false;
    return min_hermitian_eigenvalue(m) >= -tol * opnorm(m);
  };
  c.rSemidefinite = semidefinite(ph.R);
  c.qeSemidefinite = semidefinite(ph.Q.adjoint() * ph.E);
  return c;
}

Pencil BlockForm::reassemble() const {
  const Eigen::Index n = size();
  const Eigen::Index n2 = n - n1;
  ComplexDense eb = ComplexDense::Zero(n, n);
  eb.topLeftCorner(n1, n1) = E11;
  ComplexDense ab(n, n);
  ab.topLeftCorner(n1, n1) = A11;
  ab.topRightCorner(n1, n2) = A12;
  ab.bottomLeftCorner(n2, n1) = A21;
  ab.bottomRightCorner(n2, n2) = A22;
  return Pencil(U * eb * U.adjoint(), U * ab * U.adjoint());
}

std::string to_string(StructureVerdict v) {
  switch (v) {
    case StructureVerdict::Index2Candidate: return "Index2Candidate";
    case StructureVerdict::SimpleInfinityBlocksPresent: return "SimpleInfinityBlocksPresent";
    case StructureVerdict::NotApplicable: return "NotApplicable";
  }
  return "NotApplicable";
}

double default_rank_tol(const ComplexDense &e) {
  return static_cast<double>(e.rows()) * kEps * opnorm(e);
}

BlockForm project_blocks(const Pencil &p, std::optional<double> rank_tol) {
  const Eigen::Index n = p.size();
  const double norm_e = opnorm(p.E);
  if (!is_hermitian(p.E)) fail(ErrorKind::NotSemidefinite, "E is not Hermitian");

  BlockForm b;
  b.rankTol = rank_tol.value_or(static_cast<double>(n) * kEps * norm_e);

  RealVector evals(n);
  ComplexDense u(n, n);
  if (p.E.isDiagonal(0.0)) {
    // Exact permutation basis for diagonal E.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
      return p.E(i, i).real() > p.E(j, j).real();
    });
    u.setZero();
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index src = order[static_cast<std::size_t>(k)];
      u(src, k) = 1.0;
      evals(k) = p.E(src, src).real();
    }
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexDense> es(0.5 * (p.E + p.E.adjoint()));
    if (es.info() != Eigen::Success) fail(ErrorKind::NonConvergence, "Hermitian eigensolver failed");
    evals = es.eigenvalues().reverse();
    u = es.eigenvectors().rowwise().reverse();
  }
  if (n > 0 && evals(n - 1) < -kHermTol * norm_e) {
    fail(ErrorKind::NotSemidefinite, "E has eigenvalue " + std::to_string(evals(n - 1)));
  }

  Eigen::Index n1 = 0;
  while (n1 < n && evals(n1) > b.rankTol) ++n1;
  if (n1 == 0 && sigma_min(p.A) <= static_cast<double>(n) * kEps * opnorm(p.A)) {
    fail(ErrorKind::AllRankDeficient, "E vanishes and A is singular; the pencil is not regular");
  }

  const ComplexDense at = u.adjoint() * p.A * u;
  const Eigen::Index n2 = n - n1;
  b.U = u;
  b.n1 = n1;
  b.E11 = evals.head(n1).cast<Complex>().asDiagonal();
  b.A11 = at.topLeftCorner(n1, n1);
  b.A12 = at.topRightCorner(n1, n2);
  b.A21 = at.bottomLeftCorner(n2, n1);
  b.A22 = at.bottomRightCorner(n2, n2);
  return b;
}

StructureReport check_index2_structure(const BlockForm &b, std::optional<double> tol) {
  const Eigen::Index n = b.size();
  const Eigen::Index n1 = b.n1;
  const Eigen::Index n2 = n - n1;

  ComplexDense ab(n, n);
  ab.topLeftCorner(n1, n1) = b.A11;
  ab.topRightCorner(n1, n2) = b.A12;
  ab.bottomLeftCorner(n2, n1) = b.A21;
  ab.bottomRightCorner(n2, n2) = b.A22;

  StructureReport r;
  r.tol = tol.value_or(1e-10 * opnorm(ab));
  r.a22Norm = opnorm(b.A22);
  r.n1LessThanN = n1 < n;
  r.e11SigmaMin = n1 > 0 ? b.E11.diagonal().real().minCoeff() : 0.0;

  // Full column rank of the n1 x n2 block A12, full row rank of the n2 x n1 block A21.
  auto full_rank = [&](const ComplexDense &m, Eigen::Index needed) {
    if (needed == 0) return true;
    if (std::min(m.rows(), m.cols()) < needed) return false;
    const RealVector s = singular_values(m);
    return s(needed - 1) > r.tol;
  };
  r.a12FullColumnRank = full_rank(b.A12, n2);
  r.a21FullRowRank = full_rank(b.A21, n2);

  if (r.n1LessThanN && r.a22Norm > r.tol) {
    r.verdict = StructureVerdict::SimpleInfinityBlocksPresent;
  } else if (r.n1LessThanN && r.a22Norm <= r.tol && r.a12FullColumnRank && r.a21FullRowRank) {
    r.verdict = StructureVerdict::Index2Candidate;
  } else {
    r.verdict = StructureVerdict::NotApplicable;
  }
  return r;
}

double tau0_estimate(const Pencil &p, const BlockForm &b, std::span<const double> grid) {
  if (grid.empty()) fail(ErrorKind::InvalidInput, "tau0_estimate: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] < grid[i - 1]))) {
      fail(ErrorKind::InvalidInput, "tau0_estimate: grid must be positive and strictly descending");
    }
  }
  const double norm_a11 = opnorm(b.A11);
  if (norm_a11 <= 1e-14 * opnorm(p.A)) return kInf;
  const double half_smin = 0.5 * (b.n1 > 0 ? b.E11.diagonal().real().minCoeff() : 0.0);
  const Eigen::Index n = p.size();

  auto predicate = [&](double tau) {
    const ComplexDense shifted = p.E + tau * ComplexDense::Identity(n, n);
    const ComplexVector mu = eigenvalues(solve(shifted, p.A));
    return mu.cwiseAbs().maxCoeff() > norm_a11 / (tau + half_smin);
  };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!predicate(grid[i])) continue;
    if (i == 0) return grid[0];
    double lo = std::log(grid[i]);
    double hi = std::log(grid[i - 1]);
    for (int step = 0; step < 30; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (predicate(std::exp(mid))) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return std::exp(lo);
  }
  return 0.0;
}

ComplexDense cayley(const Pencil &p, double h) {
  const double tol = static_cast<double>(std::max<Eigen::Index>(p.size(), 1)) * kEps;
  return solve(p.E - h * p.A, p.E + h * p.A, tol);
}

CayleyResult cayley_with_fallback(const Pencil &p, double h) {
  double trial = h;
  for (int k = 0; k <= 20; ++k, trial *= 0.5) {
    try {
      return CayleyResult{cayley(p, trial), trial};
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::SingularMatrix) throw;
    }
  }
  fail(ErrorKind::SingularMatrix, "E - hA is singular for every h in the fallback sequence");
}

ComplexDense normalize_for_ginibre(const ComplexDense &mh) {
  require_square(mh, "normalize_for_ginibre");
  const ComplexDense x = mh + ComplexDense::Identity(mh.rows(), mh.cols());
  const double nrm = opnorm(x);
  if (!(nrm >= 1e-300)) fail(ErrorKind::DegenerateInput, "Mh + I vanishes");
  return x / nrm;
}

IdentityQForm ph_to_identityQ(const PHPencil &ph) {
  const ComplexDense qh = hermitian_sqrt(ph.Q);
  const ComplexDense qih = hermitian_inv_sqrt(ph.Q);
  IdentityQForm out;
  out.ph.E = qh * ph.E * qih;
  out.ph.J = qh * ph.J * qh;
  out.ph.R = qh * ph.R * qh;
  out.ph.Q = ComplexDense::Identity(ph.Q.rows(), ph.Q.cols());
  out.T = qih;
  return out;
}

Pencil shift_for_finite_eig(const Pencil &p, Complex lambda0) {
  const ComplexDense shifted = p.A - lambda0 * p.E;
  const double nrm = opnorm(shifted);
  if (!is_hermitian(shifted) || min_hermitian_eigenvalue(shifted) < -kHermTol * nrm) {
    fail(ErrorKind::HypothesisViolated, "A - lambda0 E is not positive semidefinite");
  }
  return Pencil(shifted, p.E);
}

ComplexDense uv_direction(const ComplexDense &e) {
  const SVDTriple s = svd(e);
  return s.U * s.V.adjoint();
}

double min_abs_eig_reversal(const Pencil &p, double tau) {
  if (!(tau > 0.0)) fail(ErrorKind::DomainError, "tau must be positive");
  const Eigen::Index n = p.size();
  const ComplexDense shifted = p.E + tau * ComplexDense::Identity(n, n);
  const ComplexVector mu = eigenvalues(solve(shifted, p.A));
  const double m = mu.size() > 0 ? mu.cwiseAbs().maxCoeff() : 0.0;
  if (m < 1e-300) return kInf;
  return 1.0 / m;
}

}  // namespace pindex

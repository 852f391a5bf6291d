// SPDX-License-Identifier: Apache-2.0

#include "pindex/bench.hpp"

#include <random>

namespace pindex {
namespace {

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, CounterRng &rng, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Eigen::MatrixXd m(rows, cols);
  // column-major fill order is part of the seed contract
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

void require_positive(double v, const char *name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::DomainError, std::string("strings parameter ") + name + " must be positive");
}

}  // namespace

Pencil gen_toy(Eigen::Index n, CounterRng &rng) {
  if (n < 1) fail(ErrorKind::InvalidInput, "gen_toy needs n >= 1");
  const Eigen::MatrixXd j0 = standard_normal(n, n, rng);
  const Eigen::MatrixXd r0 = standard_normal(n, n, rng);
  const double nr = opnorm(r0);

  ComplexDense e = ComplexDense::Zero(2 * n, 2 * n);
  e.topLeftCorner(n, n).setIdentity();
  ComplexDense a = ComplexDense::Zero(2 * n, 2 * n);
  a.topLeftCorner(n, n) = ((r0 * r0.transpose()) / (nr * nr)).cast<Complex>();
  a.topRightCorner(n, n) = (-j0.transpose()).cast<Complex>();
  a.bottomLeftCorner(n, n) = j0.cast<Complex>();
  return Pencil(std::move(e), std::move(a));
}

Pencil gen_congruence(const Pencil &p, CounterRng &rng) {
  const ComplexDense s = standard_normal(p.size(), p.size(), rng).cast<Complex>();
  return Pencil(s * p.E * s.adjoint(), s * p.A * s.adjoint());
}

StringsParams StringsParams::case_a(Eigen::Index n, double eps) {
  StringsParams sp;
  sp.n = n;
  sp.eps = eps;
  sp.which = StringsCase::A;
  return sp;
}

StringsParams StringsParams::case_b(Eigen::Index n, double eps) {
  StringsParams sp = case_a(n, eps);
  sp.which = StringsCase::B;
  return sp;
}

ComplexDense strings_incidence(Eigen::Index n) {
  ComplexDense p = ComplexDense::Identity(n, n);
  for (Eigen::Index i = 1; i < n; ++i) p(i, i - 1) = -1.0;
  return p;
}

PHPencil gen_strings(const StringsParams &sp) {
  if (sp.n < 1) fail(ErrorKind::DomainError, "strings model needs n >= 1");
  require_positive(sp.mass, "mass");
  require_positive(sp.damper, "damper");
  require_positive(sp.tap, "tap");
  require_positive(sp.spring, "spring");
  require_positive(sp.ground, "ground");
  require_positive(sp.eps, "eps");

  const Eigen::Index n = sp.n;
  RealVector m = RealVector::Constant(n, sp.mass);
  RealVector d = RealVector::Constant(n, sp.damper);
  RealVector t = RealVector::Constant(n, sp.tap);
  RealVector k = RealVector::Constant(n, sp.spring);
  d(n - 1) = 0.0;
  k(n - 1) = 0.0;
  m(0) = sp.eps;
  if (sp.which == StringsCase::A) {
    if (n > 1) d(0) = sp.eps;
    t(0) = sp.eps;
  }

  const ComplexDense p = strings_incidence(n);
  const ComplexDense c = p * d.cast<Complex>().asDiagonal() * p.transpose() +
                         ComplexDense(t.cast<Complex>().asDiagonal());
  const ComplexDense kk = p * k.cast<Complex>().asDiagonal() * p.transpose() +
                          ComplexDense(RealVector::Constant(n, sp.ground).cast<Complex>().asDiagonal());

  PHPencil ph;
  ph.E = ComplexDense::Identity(2 * n, 2 * n);
  ph.E.topLeftCorner(n, n) = m.cast<Complex>().asDiagonal();
  ph.J = ComplexDense::Zero(2 * n, 2 * n);
  ph.J.topRightCorner(n, n) = -ComplexDense::Identity(n, n);
  ph.J.bottomLeftCorner(n, n) = ComplexDense::Identity(n, n);
  ph.R = ComplexDense::Zero(2 * n, 2 * n);
  ph.R.topLeftCorner(n, n) = c;
  ph.Q = ComplexDense::Identity(2 * n, 2 * n);
  ph.Q.bottomRightCorner(n, n) = kk;
  return ph;
}

Pencil gen_analytic2x2() {
  ComplexDense e = ComplexDense::Zero(2, 2);
  e(0, 0) = 1.0;
  ComplexDense a = ComplexDense::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  return Pencil(std::move(e), std::move(a));
}

PerturbedPencil gen_perturbed(const Pencil &p, double variance, CounterRng &rng) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) fail(ErrorKind::InvalidInput, "variance must be nonnegative");
  PerturbedPencil out;
  if (variance == 0.0) {
    out.pencil = p;
    out.deltaA = ComplexDense::Zero(p.size(), p.size());
    return out;
  }
  out.deltaA = standard_normal(p.size(), p.size(), rng, std::sqrt(variance)).cast<Complex>();
  out.measuredDelta = opnorm(out.deltaA);
  out.pencil = Pencil(p.E, p.A + out.deltaA);
  return out;
}

}  // namespace pindex

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "pindex/bench.hpp"
#include "pindex/grid.hpp"
#include "pindex/pencil.hpp"
#include "support.hpp"

using namespace pindex;
using testing::close;
using testing::diag;
using testing::mat;
using testing::max_diff;

namespace {

std::vector<double> descending_grid(double lo, double hi, std::size_t n) {
  auto g = log_grid(lo, hi, n);
  return {g.rbegin(), g.rend()};
}

}  // namespace

TEST_CASE("pencil construction validates shape and values") {
  CHECK_THROWS_AS(Pencil(ComplexDense::Identity(2, 2), ComplexDense::Identity(3, 3)), Error);
  CHECK_THROWS_AS(Pencil(ComplexDense::Identity(2, 3), ComplexDense::Identity(2, 3)), Error);
  ComplexDense bad = ComplexDense::Identity(2, 2);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Pencil(bad, ComplexDense::Identity(2, 2)), Error);
}

TEST_CASE("check_ph") {
  PHPencil ph{diag({1, 0}), mat({{0, 1}, {-1, 0}}), ComplexDense::Zero(2, 2), ComplexDense::Identity(2, 2)};
  CHECK(check_ph(ph).ok());
  ph.J = mat({{1, 1}, {-1, 0}});
  CHECK_FALSE(check_ph(ph).jSkew);
  ph.J = mat({{0, 1}, {-1, 0}});
  ph.R = diag({-1, 0});
  CHECK_FALSE(check_ph(ph).rSemidefinite);
  ph.R = ComplexDense::Zero(2, 2);
  ph.E = diag({-1, 0});
  CHECK_FALSE(check_ph(ph).qeSemidefinite);
}

TEST_CASE("project_blocks: analytic pencil is already in block form") {
  const BlockForm b = project_blocks(gen_analytic2x2(), 1e-12);
  REQUIRE(b.n1 == 1);
  CHECK(b.E11(0, 0) == Complex(1.0));
  CHECK(b.A11(0, 0) == Complex(0.0));
  CHECK(b.A12(0, 0) == Complex(1.0));
  CHECK(b.A21(0, 0) == Complex(1.0));
  CHECK(b.A22(0, 0) == Complex(0.0));
}

TEST_CASE("project_blocks: toy model has an exactly zero A22") {
  CounterRng rng(11, 0);
  const Pencil p = gen_toy(5, rng);
  const BlockForm b = project_blocks(p);
  CHECK(b.n1 == 5);
  CHECK(b.A22.isZero(0.0));
  const Pencil back = b.reassemble();
  CHECK(max_diff(back.E, p.E) < 1e-14);
  CHECK(max_diff(back.A, p.A) < 1e-14);
}

TEST_CASE("project_blocks: non-diagonal E reassembles and sorts descending") {
  CounterRng rng(12, 0);
  const Pencil toy = gen_toy(4, rng);
  CounterRng srng(12, 1);
  const Pencil p = gen_congruence(toy, srng);
  const BlockForm b = project_blocks(p, 1e-6);
  CHECK(b.n1 == 4);
  const Pencil back = b.reassemble();
  CHECK(max_diff(back.A, p.A) < 1e-10 * p.A.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 1; i < b.n1; ++i) CHECK(b.E11(i, i).real() <= b.E11(i - 1, i - 1).real());
  CHECK((b.U.adjoint() * b.U - ComplexDense::Identity(8, 8)).norm() < 1e-12);
}

TEST_CASE("project_blocks: errors") {
  CHECK_THROWS_AS(project_blocks(Pencil(diag({1, -1}), ComplexDense::Identity(2, 2))), Error);
  CHECK_THROWS_AS(project_blocks(Pencil(mat({{1, 1}, {0, 1}}), ComplexDense::Identity(2, 2))), Error);
  try {
    project_blocks(Pencil(ComplexDense::Zero(2, 2), mat({{1, 1}, {1, 1}})));
    FAIL("expected AllRankDeficient");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::AllRankDeficient);
  }
}

TEST_CASE("check_index2_structure verdicts") {
  CounterRng rng(13, 0);
  CHECK(check_index2_structure(project_blocks(gen_toy(6, rng))).verdict == StructureVerdict::Index2Candidate);
  CHECK(check_index2_structure(project_blocks(gen_analytic2x2())).verdict == StructureVerdict::Index2Candidate);

  const StructureReport simple =
      check_index2_structure(project_blocks(Pencil(diag({1, 0}), ComplexDense::Identity(2, 2))));
  CHECK(simple.verdict == StructureVerdict::SimpleInfinityBlocksPresent);
  CHECK(close(simple.a22Norm, 1.0));

  // A12 is a zero column
  const StructureReport na =
      check_index2_structure(project_blocks(Pencil(diag({1, 1, 0}), mat({{1, 0, 0}, {0, 1, 0}, {1, 0, 0}}))));
  CHECK_FALSE(na.a12FullColumnRank);
  CHECK(na.a21FullRowRank);
  CHECK(na.verdict == StructureVerdict::NotApplicable);
}

TEST_CASE("tau0_estimate") {
  const Pencil p = gen_analytic2x2();
  const auto grid = descending_grid(1e-20, 1e2, 150);
  CHECK(tau0_estimate(p, project_blocks(p), grid) == kInf);

  CounterRng rng(14, 0);
  const Pencil toy = gen_toy(20, rng);
  const BlockForm b = project_blocks(toy);
  const double t0 = tau0_estimate(toy, b, grid);
  CHECK(t0 > 0.0);
  CHECK(t0 <= grid.front());

  // a descending grid is required
  CHECK_THROWS_AS(tau0_estimate(toy, b, log_grid(1e-3, 1.0, 5)), Error);
}

TEST_CASE("tau0_estimate: predicate holds at the estimate and fails just above when bisected") {
  const PHPencil ph = gen_strings(StringsParams::case_a(10, std::exp(-15.0)));
  const Pencil p = ph_to_identityQ(ph).pencil();
  const BlockForm b = project_blocks(p, 3.0 * std::exp(-15.0));
  const double t0 = tau0_estimate(p, b, descending_grid(1e-20, 1e2, 150));
  REQUIRE(t0 > 0.0);
  REQUIRE(t0 < 1e2);
  const double a11 = opnorm(b.A11);
  const double half = 0.5 * b.E11.diagonal().real().minCoeff();
  auto holds = [&](double tau) { return 1.0 / min_abs_eig_reversal(p, tau) > a11 / (tau + half); };
  CHECK(holds(t0));
  CHECK_FALSE(holds(t0 * 1.05));
}

TEST_CASE("cayley examples") {
  const ComplexDense i2 = ComplexDense::Identity(2, 2);
  CHECK(max_diff(cayley(Pencil(i2, ComplexDense::Zero(2, 2)), 0.7), i2) < 1e-15);
  CHECK(max_diff(cayley(Pencil(diag({1, 0}), i2), 0.5), diag({3, -1})) < 1e-15);

  const double l0 = 0.3, h = 0.25;
  const ComplexDense m = cayley(Pencil(diag({1}), diag({l0})), h);
  CHECK(close(m(0, 0).real(), (1 + h * l0) / (1 - h * l0), 1e-15));

  CHECK_THROWS_AS(cayley(Pencil(diag({1}), diag({1})), 1.0), Error);
  const CayleyResult cr = cayley_with_fallback(Pencil(diag({1}), diag({1})), 1.0);
  CHECK(cr.h == 0.5);
  CHECK(close(cr.Mh(0, 0).real(), 3.0, 1e-15));
}

TEST_CASE("normalize_for_ginibre") {
  const ComplexDense i2 = ComplexDense::Identity(2, 2);
  CHECK(max_diff(normalize_for_ginibre(i2), i2) < 1e-15);
  CHECK(max_diff(normalize_for_ginibre(diag({3, -1})), diag({1, 0})) < 1e-15);
  CHECK_THROWS_AS(normalize_for_ginibre(-i2), Error);
  CounterRng rng(15, 0);
  const ComplexDense m = normalize_for_ginibre(cayley_with_fallback(gen_toy(10, rng)).Mh);
  CHECK(close(opnorm(m), 1.0, 1e-12));
}

TEST_CASE("ph_to_identityQ") {
  PHPencil ph{ComplexDense::Identity(2, 2), mat({{0, 1}, {-1, 0}}), ComplexDense::Zero(2, 2), diag({4, 1})};
  const IdentityQForm f = ph_to_identityQ(ph);
  CHECK(max_diff(f.ph.J, mat({{0, 2}, {-2, 0}})) < 1e-15);
  CHECK(max_diff(f.ph.E, ComplexDense::Identity(2, 2)) < 1e-15);
  CHECK(max_diff(f.T, diag({0.5, 1})) < 1e-15);

  PHPencil iq = ph;
  iq.Q = ComplexDense::Identity(2, 2);
  const IdentityQForm same = ph_to_identityQ(iq);
  CHECK(max_diff(same.ph.J, iq.J) < 1e-15);
  CHECK(max_diff(same.T, iq.Q) < 1e-15);

  const PHPencil strings = gen_strings(StringsParams::case_a(10, std::exp(-15.0)));
  const IdentityQForm sf = ph_to_identityQ(strings);
  CHECK(check_ph(sf.ph).ok());
  CHECK(sf.ph.Q.isIdentity(0.0));

  ph.Q = diag({1, -1});
  CHECK_THROWS_AS(ph_to_identityQ(ph), Error);
}

TEST_CASE("ph_to_identityQ: reduced pencil is similar to the original, tau shift included") {
  const PHPencil ph = gen_strings(StringsParams::case_a(4, 1e-3));
  const Pencil orig = ph.as_pencil();
  const Pencil red = ph_to_identityQ(ph).pencil();
  for (double tau : {1e-6, 1e-3, 1.0})
    CHECK(close(min_abs_eig_reversal(orig, tau), min_abs_eig_reversal(red, tau), 1e-8));
}

TEST_CASE("shift_for_finite_eig") {
  const Pencil rev = shift_for_finite_eig(Pencil(mat({{0, 1}, {1, 0}}), diag({2, 1})), 0.0);
  CHECK(max_diff(rev.E, diag({2, 1})) == 0.0);
  CHECK(max_diff(rev.A, mat({{0, 1}, {1, 0}})) == 0.0);

  const Pencil s = shift_for_finite_eig(Pencil(diag({1, 0}), diag({2, 1})), 1.0);
  CHECK(max_diff(s.E, diag({1, 1})) < 1e-15);
  CHECK(max_diff(s.A, diag({1, 0})) < 1e-15);

  CHECK_THROWS_AS(shift_for_finite_eig(Pencil(diag({1, 0}), diag({-1, 1})), Complex(0, 1)), Error);
}

TEST_CASE("uv_direction") {
  CHECK(max_diff(uv_direction(ComplexDense::Identity(2, 2)), ComplexDense::Identity(2, 2)) < 1e-14);
  CHECK(max_diff(uv_direction(diag({2, 3})), ComplexDense::Identity(2, 2)) < 1e-14);
  const ComplexDense w = uv_direction(mat({{0, 1}, {0, 0}}));
  CHECK((w * w.adjoint() - ComplexDense::Identity(2, 2)).norm() < 1e-14);
  // maps the top right singular vector e2 to the top left one e1
  CHECK(std::abs(std::abs(w(0, 1)) - 1.0) < 1e-14);
}

TEST_CASE("min_abs_eig_reversal") {
  const Pencil p = gen_analytic2x2();
  for (double tau : {1e-12, 1e-6, 0.01, 1.0, 50.0})
    CHECK(close(min_abs_eig_reversal(p, tau), std::sqrt(tau * (1.0 + tau)), 1e-10));
  CHECK(close(min_abs_eig_reversal(p, 1.0), std::sqrt(2.0), 1e-14));
  const ComplexDense i2 = ComplexDense::Identity(2, 2);
  CHECK(close(min_abs_eig_reversal(Pencil(i2, i2), 1.0), 2.0, 1e-14));
  CHECK_THROWS_AS(min_abs_eig_reversal(p, 0.0), Error);
  CHECK(min_abs_eig_reversal(Pencil(i2, ComplexDense::Zero(2, 2)), 1.0) == kInf);
}

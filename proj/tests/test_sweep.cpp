// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>

#include "pindex/bench.hpp"
#include "pindex/slope.hpp"
#include "pindex/sweep.hpp"
#include "support.hpp"

using namespace pindex;
using testing::close;

namespace {

bool bitwise_equal(const std::vector<double> &a, const std::vector<double> &b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> descending(const std::vector<double> &g) { return {g.rbegin(), g.rend()}; }

Pencil toy(Eigen::Index n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  return gen_toy(n, rng);
}

}  // namespace

TEST_CASE("analytic pencil follows sqrt(tau (1 + tau))") {
  SweepConfig cfg;
  cfg.delta = 0.0;
  const SweepCurve c = run_sweep(gen_analytic2x2(), cfg);
  REQUIRE(c.tau.size() == 150);
  CHECK(c.value.size() == 150);
  CHECK(c.lowerEnv.size() == 150);
  CHECK(c.upperEnv.size() == 150);
  CHECK(c.tau0 == kInf);
  for (std::size_t i = 0; i < c.tau.size(); ++i) {
    const double t = c.tau[i];
    CHECK(close(c.value[i], std::sqrt(t * (1 + t)), 1e-10));
  }
  const auto slopes = fit_loglog_slopes(c.tau, c.value);
  CHECK(close(slopes.front().slope, 0.5, 1e-6));
  CHECK(c.metadata.method == "method1");
  CHECK(c.metadata.regime == "Thm1");
  CHECK_FALSE(c.metadata.notes.contains("gaps"));
}

TEST_CASE("values are positive and envelopes contain the curve at delta = 0") {
  SweepConfig cfg;
  cfg.delta = 0.0;
  cfg.tauGrid = log_grid(1e-16, 1e2, 60);
  auto check = [&](const Pencil &p) {
    const SweepCurve c = run_sweep(p, cfg);
    int bracketed = 0;
    for (std::size_t i = 0; i < c.tau.size(); ++i) {
      CHECK(c.value[i] > 0.0);
      if (std::isnan(c.upperEnv[i])) continue;
      CHECK(c.lowerEnv[i] <= c.value[i] * (1 + 1e-9));
      CHECK(c.value[i] <= c.upperEnv[i] * (1 + 1e-9));
      ++bracketed;
    }
    return bracketed;
  };
  CHECK(check(gen_analytic2x2()) == 60);
  for (std::uint64_t s = 0; s < 3; ++s) CHECK(check(toy(10, 30 + s)) > 20);
}

TEST_CASE("determinism and markers") {
  SweepConfig cfg;
  cfg.tauGrid = log_grid(1e-12, 1e2, 40);
  const Pencil p = toy(12, 31);
  const SweepCurve a = run_sweep(p, cfg);
  const SweepCurve b = run_sweep(p, cfg);
  CHECK(bitwise_equal(a.value, b.value));
  CHECK(bitwise_equal(a.lowerEnv, b.lowerEnv));
  CHECK(bitwise_equal(a.upperEnv, b.upperEnv));
  CHECK(a.delta == cfg.delta);
  const double t0 =
      tau0_estimate(p, project_blocks(p, std::max(default_rank_tol(p.E), cfg.delta)), descending(cfg.tauGrid));
  CHECK(a.tau0 == t0);
  // envelopes only between delta and tau0
  for (std::size_t i = 0; i < a.tau.size(); ++i) {
    if (a.tau[i] <= cfg.delta || a.tau[i] > a.tau0) CHECK(std::isnan(a.lowerEnv[i]));
  }
}

TEST_CASE("scaling covariance") {
  const Pencil p = toy(8, 32);
  const double s = std::exp(3.0);
  SweepConfig base;
  base.delta = 0.0;
  base.envelopeRegime.reset();
  base.tauGrid = log_grid(1e-10, 1e1, 30);
  SweepConfig scaled = base;
  for (double &t : scaled.tauGrid) t *= s;
  const SweepCurve a = run_sweep(p, base);
  const SweepCurve b = run_sweep(p.scaled(s), scaled);
  for (std::size_t i = 0; i < a.tau.size(); ++i) CHECK(close(b.value[i], a.value[i], 1e-8));

  // the scale option is the same operation
  SweepConfig opt = scaled;
  opt.scale = s;
  const SweepCurve c = run_sweep(p, opt);
  CHECK(bitwise_equal(b.value, c.value));
  CHECK(c.metadata.scale == s);
}

TEST_CASE("toy model shows a slope 1/2 region") {
  SweepConfig cfg;
  const SweepCurve c = run_sweep(toy(30, 33), cfg);
  const IndexVerdict v = classify_curve(c.tau, c.value, CurveMarkers{c.delta, c.tau0, std::nullopt});
  CHECK(v.verdict == IndexClass::Index2);
}

TEST_CASE("strings case b: index one, no envelope") {
  SweepConfig cfg;
  cfg.envelopeRegime.reset();
  const SweepCurve c = run_sweep(gen_strings(StringsParams::case_b(10, std::exp(-15.0))), cfg);
  CHECK_FALSE(c.has_envelope());
  CHECK(c.metadata.regime == "none");
  const IndexVerdict v = classify_curve(c.tau, c.value, CurveMarkers{std::nullopt, c.tau0, std::nullopt});
  CHECK(v.verdict == IndexClass::Index1);
}

TEST_CASE("pH sweep uses the port-Hamiltonian envelope") {
  SweepConfig cfg;
  cfg.tauGrid = log_grid(1e-12, 1e2, 30);
  const SweepCurve a = run_sweep(gen_strings(StringsParams::case_a(6, std::exp(-15.0))), cfg);
  CHECK(a.metadata.regime == "CorPH_Qweighted");
  PHPencil ph{testing::diag({1, 0}), testing::mat({{0, 1}, {-1, 0}}), ComplexDense::Zero(2, 2),
              ComplexDense::Identity(2, 2)};
  cfg.delta = 0.0;
  const SweepCurve b = run_sweep(ph, cfg);
  CHECK(b.metadata.regime == "CorPH_QI");
  for (std::size_t i = 0; i < b.tau.size(); ++i) {
    const double t = b.tau[i];
    CHECK(close(b.value[i], std::sqrt(t * (1 + t)), 1e-10));
    CHECK(b.lowerEnv[i] <= b.value[i] * (1 + 1e-12));
    CHECK(b.value[i] <= b.upperEnv[i] * (1 + 1e-12));
  }
}

TEST_CASE("configuration errors") {
  const Pencil p = gen_analytic2x2();
  SweepConfig cfg;
  cfg.tauGrid = {1.0, 0.5};
  CHECK_THROWS_AS(run_sweep(p, cfg), Error);
  cfg.tauGrid = {0.0, 1.0};
  CHECK_THROWS_AS(run_sweep(p, cfg), Error);
  cfg.tauGrid = log_grid(1e-3, 1.0, 5);
  cfg.delta = 1e-3;
  cfg.perturbation = Perturbation{ComplexDense::Zero(2, 2), ComplexDense::Identity(2, 2)};
  CHECK_THROWS_AS(run_sweep(p, cfg), Error);
}

TEST_CASE("perturbation study") {
  const Pencil p = toy(10, 34);
  SweepConfig cfg;
  cfg.tauGrid = log_grid(1e-14, 1e2, 40);
  const auto curves = run_perturbation_study(p, {0.0, std::exp(-7.0), std::exp(-3.0)}, cfg, 9);
  REQUIRE(curves.size() == 3);

  SweepConfig base = cfg;
  base.delta = 0.0;
  base.envelopeRegime = EnvelopeRegime::CorDeltaE0;
  const SweepCurve ref = run_sweep(p, base);
  CHECK(bitwise_equal(curves[0].value, ref.value));
  CHECK(bitwise_equal(curves[0].lowerEnv, ref.lowerEnv));

  for (const auto &c : curves) CHECK(c.metadata.regime == "CorDeltaE0");
  CHECK(curves[0].delta == 0.0);
  CHECK(curves[1].delta > 0.0);
  CHECK(curves[2].delta > curves[1].delta);
  CHECK(curves[2].metadata.notes.at("measuredDelta") != "0");

  // same seed, same curves
  const auto again = run_perturbation_study(p, {0.0, std::exp(-7.0)}, cfg, 9);
  CHECK(again[1].delta == curves[1].delta);
  CHECK(bitwise_equal(again[1].value, curves[1].value));

  CHECK_THROWS_AS(run_perturbation_study(p, {-1.0}, cfg, 9), Error);
}

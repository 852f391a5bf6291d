// SPDX-License-Identifier: Apache-2.0

#include "pindex/sweep.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "parallel.hpp"
#include "pindex/bench.hpp"

namespace pindex {
namespace {

struct EnvelopeContext {
  EnvelopeRegime regime = EnvelopeRegime::Thm1;
  std::function<BoundEnvelope(double tau, double gamma)> envelope;
  Pencil kappaPencil;  // (E + tau I)^{-1} A of this pencil feeds kappa_V
  double normA = 0.0;
  std::optional<double> phNormE;  // R = 0: closed-form kappa_V surrogate
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> descending(const std::vector<double> &grid) { return {grid.rbegin(), grid.rend()}; }

Pencil apply_perturbation(const Pencil &p, const SweepConfig &cfg) {
  if (!cfg.perturbation) return p;
  const auto &pt = *cfg.perturbation;
  if (pt.dE.rows() != p.size() || pt.dE.cols() != p.size() || pt.dA.rows() != p.size() ||
      pt.dA.cols() != p.size()) {
    fail(ErrorKind::InvalidInput, "perturbation is not conformable with the pencil");
  }
  const double slack = 1.0 + 1e-12;
  if (opnorm(pt.dE) > cfg.delta * slack || opnorm(pt.dA) > cfg.delta * slack) {
    fail(ErrorKind::InvalidInput, "perturbation norm exceeds delta");
  }
  return Pencil(p.E + pt.dE, p.A + pt.dA);
}

// Singular values of E up to delta belong to Delta_E, so the kernel is
// identified at that level unless the caller fixes a tolerance.
double kernel_tol(const Pencil &p, const SweepConfig &cfg) {
  if (cfg.rankTol) return *cfg.rankTol;
  const double base = default_rank_tol(p.E);
  if (cfg.envelopeRegime == EnvelopeRegime::CorDeltaE0) return base;
  return std::max(base, cfg.delta);
}

bool envelope_valid(EnvelopeRegime regime, double delta, double tau, double tau0) {
  const bool below_tau0 = std::isnan(tau0) || tau <= tau0;
  if (regime == EnvelopeRegime::CorDeltaE0) return below_tau0;
  return delta < tau && below_tau0;
}

SweepCurve sweep_impl(const Pencil &curve_pencil, const SweepConfig &cfg,
                      const std::optional<EnvelopeContext> &env, double tau0) {
  require_ascending_grid(cfg.tauGrid, "tau grid");
  if (!(cfg.delta >= 0.0)) fail(ErrorKind::InvalidInput, "delta must be nonnegative");
  const Pencil measured = apply_perturbation(curve_pencil, cfg);
  const std::size_t m = cfg.tauGrid.size();

  SweepCurve curve;
  curve.tau = cfg.tauGrid;
  curve.value.assign(m, kMissing);
  if (env) {
    curve.lowerEnv.assign(m, kMissing);
    curve.upperEnv.assign(m, kMissing);
  }
  curve.tau0 = tau0;
  curve.delta = cfg.delta;

  std::vector<int> failed(m, 0);
  detail::parallel_for(m, [&](std::size_t i) {
    const double tau = cfg.tauGrid[i];
    try {
      curve.value[i] = min_abs_eig_reversal(measured, tau);
    } catch (const Error &) {
      failed[i] = 1;
    }
    if (!env || !envelope_valid(env->regime, cfg.delta, tau, tau0)) return;
    try {
      double kappa = 1.0;
      if (cfg.delta > 0.0) {
        if (env->phNormE) {
          kappa = kappaV_ph_bound(*env->phNormE, tau);
        } else {
          const Pencil &kp = env->kappaPencil;
          const ComplexDense shifted = kp.E + tau * ComplexDense::Identity(kp.size(), kp.size());
          kappa = kappaV_estimate(solve(shifted, kp.A));
        }
      }
      const double g = env->regime == EnvelopeRegime::CorDeltaE0
                           ? gamma_deltaE0(cfg.delta, tau, kappa)
                           : gamma(cfg.delta, tau, kappa, env->normA);
      const BoundEnvelope b = env->envelope(tau, g);
      if (std::isfinite(b.upper) && b.upper > 0.0) curve.lowerEnv[i] = 1.0 / b.upper;
      if (b.lower > 0.0 && std::isfinite(b.lower)) curve.upperEnv[i] = 1.0 / b.lower;
    } catch (const Error &) {
      // Envelope side stays missing.
    }
  });

  curve.metadata.method = "method1";
  curve.metadata.scale = cfg.scale;
  curve.metadata.regime = env ? to_string(env->regime) : "none";
  const auto gaps = std::count(failed.begin(), failed.end(), 1);
  if (gaps > 0) curve.metadata.notes["gaps"] = std::to_string(gaps);
  return curve;
}

}  // namespace

SweepCurve run_sweep(const Pencil &input, const SweepConfig &cfg) {
  require_ascending_grid(cfg.tauGrid, "tau grid");
  const Pencil p = cfg.scale == 1.0 ? input : input.scaled(cfg.scale);

  std::optional<BlockForm> b;
  double tau0 = kMissing;
  try {
    b = project_blocks(p, kernel_tol(p, cfg));
    tau0 = tau0_estimate(p, *b, descending(cfg.tauGrid));
  } catch (const Error &) {
    if (cfg.envelopeRegime) throw;
  }

  std::optional<EnvelopeContext> env;
  if (cfg.envelopeRegime) {
    EnvelopeContext ctx;
    ctx.regime = *cfg.envelopeRegime == EnvelopeRegime::CorDeltaE0 ? EnvelopeRegime::CorDeltaE0
                                                                    : EnvelopeRegime::Thm1;
    const Thm1Constants c = thm1_constants(*b);
    const EnvelopeRegime regime = ctx.regime;
    ctx.envelope = [c, regime](double tau, double g) { return thm1_envelope(c, tau, g, regime); };
    ctx.kappaPencil = p;
    ctx.normA = opnorm(p.A);
    env = std::move(ctx);
  }

  SweepCurve curve = sweep_impl(p, cfg, env, tau0);
  if (b) {
    curve.metadata.notes["n1"] = std::to_string(b->n1);
    curve.metadata.notes["rankTol"] = format_double(b->rankTol);
  }
  return curve;
}

SweepCurve run_sweep(const PHPencil &input, const SweepConfig &cfg) {
  require_ascending_grid(cfg.tauGrid, "tau grid");
  PHPencil ph = input;
  if (cfg.scale != 1.0) {
    ph.E *= cfg.scale;
    ph.J *= cfg.scale;
    ph.R *= cfg.scale;
  }
  const Pencil curve_pencil = ph.as_pencil();
  const bool q_identity = ph.Q.isIdentity(0.0);
  const Pencil reduced = q_identity ? curve_pencil : ph_to_identityQ(ph).pencil();

  std::optional<BlockForm> b;
  double tau0 = kMissing;
  try {
    b = project_blocks(reduced, kernel_tol(reduced, cfg));
    tau0 = tau0_estimate(reduced, *b, descending(cfg.tauGrid));
  } catch (const Error &) {
    if (cfg.envelopeRegime) throw;
  }

  std::optional<EnvelopeContext> env;
  if (cfg.envelopeRegime) {
    EnvelopeContext ctx;
    ctx.regime = q_identity ? EnvelopeRegime::CorPH_QI : EnvelopeRegime::CorPH_Qweighted;
    const PHConstants c = q_identity ? ph_constants(ph.E, ph.J, *b)
                                     : ph_constants(ph.E, ph.J * ph.Q, *b, ph.Q);
    const EnvelopeRegime regime = ctx.regime;
    ctx.envelope = [c, regime](double tau, double g) { return ph_envelope(c, tau, g, regime); };
    ctx.kappaPencil = reduced;
    ctx.normA = opnorm(reduced.A);
    if (ph.R.isZero(0.0)) ctx.phNormE = opnorm(reduced.E);
    env = std::move(ctx);
  }

  SweepCurve curve = sweep_impl(curve_pencil, cfg, env, tau0);
  if (b) {
    curve.metadata.notes["n1"] = std::to_string(b->n1);
    curve.metadata.notes["rankTol"] = format_double(b->rankTol);
  }
  curve.metadata.notes["qMetric"] = q_identity ? "identity" : "Q-weighted (reduced pencil)";
  return curve;
}

std::vector<SweepCurve> run_perturbation_study(const Pencil &p, const std::vector<double> &variances,
                                               const SweepConfig &cfg, std::uint64_t seed) {
  std::vector<SweepCurve> out;
  out.reserve(variances.size());
  for (std::size_t i = 0; i < variances.size(); ++i) {
    const double variance = variances[i];
    if (!(variance >= 0.0)) fail(ErrorKind::InvalidInput, "variances must be nonnegative");
    SweepConfig c = cfg;
    c.envelopeRegime = EnvelopeRegime::CorDeltaE0;
    c.perturbation.reset();
    c.delta = 0.0;
    double measured = 0.0;
    if (variance > 0.0) {
      // streams kept clear of the low indices the generators use
      CounterRng rng(seed, (std::uint64_t{1} << 32) + i);
      PerturbedPencil pp = gen_perturbed(p, variance, rng);
      measured = pp.measuredDelta;
      // Delta_A is applied after scaling, so its norm scales with it.
      c.delta = measured * cfg.scale;
      c.perturbation = Perturbation{ComplexDense::Zero(p.size(), p.size()), cfg.scale * pp.deltaA};
    }
    SweepCurve curve = run_sweep(p, c);
    curve.metadata.seed = seed;
    curve.metadata.notes["variance"] = format_double(variance);
    curve.metadata.notes["measuredDelta"] = format_double(measured);
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace pindex

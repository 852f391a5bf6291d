// SPDX-License-Identifier: Apache-2.0

#include "pindex/bounds.hpp"

#include <cmath>
#include <numbers>

namespace pindex {

std::string to_string(EnvelopeRegime r) {
  switch (r) {
    case EnvelopeRegime::Thm1: return "Thm1";
    case EnvelopeRegime::CorDeltaE0: return "CorDeltaE0";
    case EnvelopeRegime::CorPH_QI: return "CorPH_QI";
    case EnvelopeRegime::CorPH_Qweighted: return "CorPH_Qweighted";
  }
  return "Thm1";
}

std::optional<EnvelopeRegime> envelope_regime_from_string(const std::string &s) {
  for (auto r : {EnvelopeRegime::Thm1, EnvelopeRegime::CorDeltaE0, EnvelopeRegime::CorPH_QI,
                 EnvelopeRegime::CorPH_Qweighted}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

double gamma(double delta, double tau, double kappaV, double normA) {
  if (!(delta >= 0.0) || !(delta < tau)) fail(ErrorKind::DomainError, "gamma requires 0 <= delta < tau");
  if (delta == 0.0) return 0.0;
  return delta * kappaV * (tau + normA) / (tau * (tau - delta));
}

double gamma_deltaE0(double delta, double tau, double kappaV) {
  if (!(tau > 0.0)) fail(ErrorKind::DomainError, "gamma_deltaE0 requires tau > 0");
  if (!(delta >= 0.0)) fail(ErrorKind::DomainError, "gamma_deltaE0 requires delta >= 0");
  if (delta == 0.0) return 0.0;
  return delta * kappaV / tau;
}

Thm1Constants thm1_constants(const BlockForm &b) {
  Thm1Constants c;
  const ComplexDense prod = b.A12 * b.A21;
  c.sminA12A21 = sigma_min(prod);
  c.normA12A21 = opnorm(prod);
  c.normE11 = opnorm(b.E11);
  c.sminE11 = b.n1 > 0 ? sigma_min(b.E11) : 0.0;
  return c;
}

BoundEnvelope thm1_envelope(const Thm1Constants &c, double tau, double gamma, EnvelopeRegime regime) {
  if (!(tau > 0.0)) fail(ErrorKind::DomainError, "envelope requires tau > 0");
  if (!(c.sminE11 > 0.0)) fail(ErrorKind::DomainError, "sigma_min(E11) vanishes");
  BoundEnvelope env;
  env.tau = tau;
  env.regime = regime;
  env.gammaValue = gamma;
  const double scale = 1.0 / std::sqrt(tau);
  if (gamma == kInf) {
    env.lower = -kInf;
    env.upper = kInf;
    return env;
  }
  env.lower = scale * std::sqrt(c.sminA12A21 / (1.5 * c.normE11 + 2.0 * tau)) - gamma;
  env.upper = scale * std::sqrt(c.normA12A21 / (0.5 * c.sminE11)) + gamma;
  return env;
}

BoundEnvelope thm1_envelope(const BlockForm &b, double tau, double gamma) {
  if (b.n1 < 1) fail(ErrorKind::DomainError, "block form has an empty range block");
  return thm1_envelope(thm1_constants(b), tau, gamma);
}

PHConstants ph_constants(const ComplexDense &e, const ComplexDense &j, const BlockForm &b,
                         const std::optional<ComplexDense> &weight) {
  PHConstants c;
  if (weight && !weight->isIdentity(0.0)) {
    const ComplexDense wh = hermitian_sqrt(*weight);
    const ComplexDense wih = hermitian_inv_sqrt(*weight);
    const ComplexDense jw = wh * j * wih;
    c.sminJ = sigma_min(jw);
    c.normJ = opnorm(jw);
    c.normE = opnorm(wh * e * wih);
  } else {
    c.sminJ = sigma_min(j);
    c.normJ = opnorm(j);
    c.normE = opnorm(e);
  }
  c.sminE11 = b.n1 > 0 ? sigma_min(b.E11) : 0.0;
  return c;
}

BoundEnvelope ph_envelope(const PHConstants &c, double tau, double gamma, EnvelopeRegime regime) {
  if (!(tau > 0.0)) fail(ErrorKind::DomainError, "envelope requires tau > 0");
  if (!(c.sminE11 > 0.0)) fail(ErrorKind::DomainError, "sigma_min(E11) vanishes");
  BoundEnvelope env;
  env.tau = tau;
  env.regime = regime;
  env.gammaValue = gamma;
  if (gamma == kInf) {
    env.lower = -kInf;
    env.upper = kInf;
    return env;
  }
  const double scale = 1.0 / std::sqrt(tau);
  env.lower = scale * c.sminJ / std::sqrt(1.5 * c.normE + 2.0 * tau) - gamma;
  env.upper = scale * c.normJ / (0.5 * std::sqrt(c.sminE11)) + gamma;
  return env;
}

BoundEnvelope ph_envelope(const ComplexDense &e, const ComplexDense &j, const BlockForm &b, double tau,
                          double gamma, const std::optional<ComplexDense> &weight) {
  const bool weighted = weight && !weight->isIdentity(0.0);
  return ph_envelope(ph_constants(e, j, b, weight), tau, gamma,
                     weighted ? EnvelopeRegime::CorPH_Qweighted : EnvelopeRegime::CorPH_QI);
}

double kappaV_ph_bound(double normE, double tau) {
  if (!(tau > 0.0)) fail(ErrorKind::DomainError, "kappaV_ph_bound requires tau > 0");
  return (normE + tau) / tau;
}

double beta_n(double n) {
  if (!(n >= 1.0)) fail(ErrorKind::DomainError, "beta_n requires n >= 1");
  const double sqrt2 = std::numbers::sqrt2;
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double bracket = 33.0 + 20.0 * sqrt2 + sqrt_pi / (2.0 * std::pow(n, 1.5)) +
                         (4.0 * sqrt2 + 4.0) / n + sqrt_pi * (8.0 * sqrt2 + 12.0) / std::sqrt(n);
  return n * n * bracket;
}

double alpha_n(double n) { return std::sqrt(n * beta_n(n)); }

BandValue thm2_band(double curve_value, double tau, const ProbBand &pb) {
  BandValue b;
  b.extrapolated = !(tau > 0.0 && tau < 1.0);
  const double w = pb.deltaNorm == 0.0 ? 0.0 : pb.alphaN * pb.deltaNorm / tau;
  b.lower = std::max(curve_value - w, 0.0);
  b.upper = curve_value + w;
  return b;
}

}  // namespace pindex

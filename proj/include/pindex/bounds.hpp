// SPDX-License-Identifier: Apache-2.0

#pragma once

// Closed-form envelopes for the diverging eigenvalue of lambda(E + tau I) - A
// and the probabilistic band of the randomized method. Envelopes are reported
// on the |mu| scale; a lower bound <= 0 is trivial and kept as is.

#include <optional>
#include <string>

#include "pindex/pencil.hpp"

namespace pindex {

enum class EnvelopeRegime { Thm1, CorDeltaE0, CorPH_QI, CorPH_Qweighted };
std::string to_string(EnvelopeRegime r);
std::optional<EnvelopeRegime> envelope_regime_from_string(const std::string &s);

struct BoundEnvelope {
  double tau = 0.0;
  double lower = 0.0;
  double upper = kInf;
  double gammaValue = 0.0;
  EnvelopeRegime regime = EnvelopeRegime::Thm1;
};

/// delta * kappaV * (tau + ||A||) / (tau (tau - delta)), for 0 <= delta < tau.
double gamma(double delta, double tau, double kappaV, double normA);

/// delta * kappaV / tau; valid for every tau > 0 when Delta_E = 0.
double gamma_deltaE0(double delta, double tau, double kappaV);

/// Block-form quantities the general envelope depends on.
struct Thm1Constants {
  double sminA12A21 = 0.0;
  double normA12A21 = 0.0;
  double normE11 = 0.0;
  double sminE11 = 0.0;
};
Thm1Constants thm1_constants(const BlockForm &b);

BoundEnvelope thm1_envelope(const Thm1Constants &c, double tau, double gamma,
                            EnvelopeRegime regime = EnvelopeRegime::Thm1);
BoundEnvelope thm1_envelope(const BlockForm &b, double tau, double gamma);

struct PHConstants {
  double sminJ = 0.0;
  double normJ = 0.0;
  double normE = 0.0;
  double sminE11 = 0.0;
};

/// With a weight W every norm and sigma_min is taken in the metric
/// ||X||_W = ||W^{1/2} X W^{-1/2}||. For a pencil lambda E - (J - R)Q pass J*Q
/// with W = Q and the block form of the Q-reduced pencil (whose E11 already
/// lives in that metric).
PHConstants ph_constants(const ComplexDense &e, const ComplexDense &j, const BlockForm &b,
                         const std::optional<ComplexDense> &weight = std::nullopt);

BoundEnvelope ph_envelope(const PHConstants &c, double tau, double gamma,
                          EnvelopeRegime regime = EnvelopeRegime::CorPH_QI);
BoundEnvelope ph_envelope(const ComplexDense &e, const ComplexDense &j, const BlockForm &b, double tau,
                          double gamma, const std::optional<ComplexDense> &weight = std::nullopt);

/// (||E|| + tau) / tau, a kappa_V surrogate for (E + tau I)^{-1} J when R = 0.
double kappaV_ph_bound(double normE, double tau);

double beta_n(double n);
/// sqrt(n * beta_n(n)).
double alpha_n(double n);

struct ProbBand {
  double n = 1;
  double deltaNorm = 0.0;
  double alphaN = 0.0;

  static ProbBand make(double n, double delta_norm) { return ProbBand{n, delta_norm, alpha_n(n)}; }
};

struct BandValue {
  double lower = 0.0;
  double upper = 0.0;
  bool extrapolated = false;  // tau outside (0, 1)
};

/// curve -/+ alpha(n) ||Delta|| / tau, clamped at zero from below.
BandValue thm2_band(double curve_value, double tau, const ProbBand &pb);

}  // namespace pindex

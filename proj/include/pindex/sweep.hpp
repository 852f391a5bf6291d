// SPDX-License-Identifier: Apache-2.0

#pragma once

// Deterministic tau-sweep: 1/|lambda(tau)| of lambda(E + tau I + Delta_E) - (A + Delta_A)
// over a grid, with the envelope of the chosen regime inverted onto the same scale.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "pindex/bounds.hpp"
#include "pindex/curve.hpp"
#include "pindex/grid.hpp"
#include "pindex/pencil.hpp"

namespace pindex {

struct Perturbation {
  ComplexDense dE;
  ComplexDense dA;
};

struct SweepConfig {
  std::vector<double> tauGrid = log_grid(1e-20, 1e2, 150);
  double delta = std::exp(-15.0);
  std::optional<EnvelopeRegime> envelopeRegime = EnvelopeRegime::Thm1;
  std::optional<Perturbation> perturbation;
  double scale = 1.0;
  std::optional<double> rankTol;  // default max(n eps ||E||, delta); delta dropped when Delta_E = 0
};

/// Missing entries (failed points, omitted envelope sides) are NaN.
struct SweepCurve {
  std::vector<double> tau;
  std::vector<double> value;     // 1/|lambda(tau)|
  std::vector<double> lowerEnv;  // 1/upper bound, empty when no envelope
  std::vector<double> upperEnv;  // 1/lower bound when the lower bound is positive
  double tau0 = kMissing;
  double delta = 0.0;
  CurveMetadata metadata;

  bool has_envelope() const { return !lowerEnv.empty(); }
};

SweepCurve run_sweep(const Pencil &p, const SweepConfig &cfg);

/// Port-Hamiltonian variant. The curve is computed on (E, (J - R)Q); envelopes
/// are the port-Hamiltonian ones, in the Q-metric when Q is not the identity. The
/// regime in `cfg` is replaced by CorPH_QI / CorPH_Qweighted unless disabled.
SweepCurve run_sweep(const PHPencil &ph, const SweepConfig &cfg);

/// One curve per variance: Delta_A with i.i.d. real N(0, variance) entries,
/// Delta_E = 0, envelopes from the Delta_E = 0 bound with delta set to the
/// sampled ||Delta_A||. Variance 0 yields the unperturbed baseline.
std::vector<SweepCurve> run_perturbation_study(const Pencil &p, const std::vector<double> &variances,
                                               const SweepConfig &cfg, std::uint64_t seed);

}  // namespace pindex

// SPDX-License-Identifier: Apache-2.0

#pragma once

// Randomized sweep: smallest eigenvalue modulus of M + tau G over Ginibre
// samples G, with the probabilistic band and the eigenvalue condition statistic.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "pindex/bounds.hpp"
#include "pindex/curve.hpp"
#include "pindex/grid.hpp"
#include "pindex/random.hpp"

namespace pindex {

/// Entries with independent N(0, 1/(2n)) real and imaginary parts; a pure
/// function of (n, key).
ComplexDense sample_ginibre(Eigen::Index n, StreamKey key);

struct GinibreConfig {
  Eigen::Index n = 1;
  int samples = 10;
  std::uint64_t seed = 0;
  std::vector<double> tauGrid = log_grid(1e-20, 1e2, 150);
  double deltaNorm = std::exp(-15.0);
  bool resamplePerTau = false;  // fresh G for every (sample, tau) instead of one per sample
};

struct RandomizedCurve {
  std::vector<double> tau;
  std::vector<double> meanMinAbs;
  Eigen::MatrixXd perSampleMinAbs;  // samples x tau, NaN for gaps
  std::vector<double> bandLower;
  std::vector<double> bandUpper;
  std::optional<double> turningPointTau;
  double deltaNorm = 0.0;
  CurveMetadata metadata;
};

/// `m` must satisfy ||m|| <= 1 + 1e-12 (see normalize_for_ginibre).
RandomizedCurve run_randomized_sweep(const ComplexDense &m, const GinibreConfig &cfg);

struct BanksEstimate {
  double mean = 0.0;
  double stdErr = 0.0;
  int used = 0;
  int skipped = 0;  // numerically defective samples
};

/// Monte-Carlo mean of sum over |lambda_i| <= r of kappa(lambda_i, M + tau G)^2.
BanksEstimate banks_statistic(const ComplexDense &m, double tau, double r, int samples, std::uint64_t seed);

/// n^2 r^2 / tau^2.
inline double banks_ceiling(double n, double tau, double r) { return n * n * r * r / (tau * tau); }

}  // namespace pindex

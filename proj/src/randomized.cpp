// SPDX-License-Identifier: Apache-2.0

#include "pindex/randomized.hpp"

#include <random>
#include <sstream>

#include "parallel.hpp"

namespace pindex {

ComplexDense sample_ginibre(Eigen::Index n, StreamKey key) {
  if (n < 1) fail(ErrorKind::InvalidInput, "sample_ginibre needs n >= 1");
  CounterRng rng(key);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5 / static_cast<double>(n)));
  ComplexDense g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

RandomizedCurve run_randomized_sweep(const ComplexDense &m, const GinibreConfig &cfg) {
  require_square(m, "M");
  require_finite(m, "M");
  require_ascending_grid(cfg.tauGrid, "tau grid");
  if (cfg.samples < 1) fail(ErrorKind::InvalidInput, "samples must be >= 1");
  if (cfg.n != m.rows()) fail(ErrorKind::InvalidInput, "GinibreConfig n does not match M");
  if (!(cfg.deltaNorm >= 0.0)) fail(ErrorKind::InvalidInput, "deltaNorm must be nonnegative");
  if (opnorm(m) > 1.0 + 1e-12) fail(ErrorKind::InvalidInput, "M must be normalized (||M|| <= 1)");

  const Eigen::Index n = cfg.n;
  const std::size_t nt = cfg.tauGrid.size();
  const std::size_t ns = static_cast<std::size_t>(cfg.samples);

  std::vector<ComplexDense> shared;
  if (!cfg.resamplePerTau) {
    shared.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) shared[s] = sample_ginibre(n, {cfg.seed, s});
  }

  RandomizedCurve out;
  out.tau = cfg.tauGrid;
  out.deltaNorm = cfg.deltaNorm;
  out.perSampleMinAbs = Eigen::MatrixXd::Constant(cfg.samples, static_cast<Eigen::Index>(nt), kMissing);

  detail::parallel_for(ns * nt, [&](std::size_t k) {
    const std::size_t s = k / nt;
    const std::size_t i = k % nt;
    const double tau = cfg.tauGrid[i];
    try {
      const ComplexDense g = cfg.resamplePerTau ? sample_ginibre(n, {cfg.seed, s * nt + i}) : ComplexDense();
      const ComplexDense x = m + tau * (cfg.resamplePerTau ? g : shared[s]);
      out.perSampleMinAbs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) =
          eigenvalues(x).cwiseAbs().minCoeff();
    } catch (const Error &) {
      // gap
    }
  });

  const ProbBand pb = ProbBand::make(static_cast<double>(n), cfg.deltaNorm);
  out.meanMinAbs.assign(nt, kMissing);
  out.bandLower.assign(nt, kMissing);
  out.bandUpper.assign(nt, kMissing);
  int gaps = 0;
  for (std::size_t i = 0; i < nt; ++i) {
    const auto col = out.perSampleMinAbs.col(static_cast<Eigen::Index>(i));
    // a failed sample makes the whole mean a gap; averaging fewer samples would bias it
    if (!col.allFinite()) {
      ++gaps;
      continue;
    }
    const double mean = col.mean();
    out.meanMinAbs[i] = mean;
    const BandValue bv = thm2_band(mean, cfg.tauGrid[i], pb);
    out.bandLower[i] = bv.lower;
    out.bandUpper[i] = bv.upper;
    if (!out.turningPointTau && mean > 0.0 && bv.upper - mean < 0.1 * mean) out.turningPointTau = cfg.tauGrid[i];
  }

  out.metadata.method = "method2";
  out.metadata.seed = cfg.seed;
  out.metadata.notes["samples"] = std::to_string(cfg.samples);
  out.metadata.notes["ginibre"] = cfg.resamplePerTau ? "resampled per tau" : "one per sample, shared across tau";
  std::ostringstream os;
  os.precision(17);
  os << pb.alphaN;
  out.metadata.notes["alphaN"] = os.str();
  if (gaps > 0) out.metadata.notes["gaps"] = std::to_string(gaps);
  return out;
}

BanksEstimate banks_statistic(const ComplexDense &m, double tau, double r, int samples, std::uint64_t seed) {
  require_square(m, "M");
  if (!(tau > 0.0 && tau < 1.0)) fail(ErrorKind::DomainError, "banks_statistic needs tau in (0, 1)");
  if (!(r > 0.0)) fail(ErrorKind::DomainError, "banks_statistic needs r > 0");
  if (samples < 1) fail(ErrorKind::InvalidInput, "samples must be >= 1");
  if (opnorm(m) > 1.0 + 1e-12) fail(ErrorKind::InvalidInput, "M must satisfy ||M|| <= 1");

  const Eigen::Index n = m.rows();
  std::vector<double> value(static_cast<std::size_t>(samples), kMissing);
  detail::parallel_for(value.size(), [&](std::size_t s) {
    try {
      const Eigensystem es = eig(m + tau * sample_ginibre(n, {seed, s}));
      const RealVector kappa = eigenvalue_condition_numbers(es);
      if (kappa.size() == 0) return;
      double sum = 0.0;
      for (Eigen::Index i = 0; i < kappa.size(); ++i)
        if (std::abs(es.values(i)) <= r) sum += kappa(i) * kappa(i);
      value[s] = sum;
    } catch (const Error &) {
    }
  });

  BanksEstimate est;
  double sum = 0.0, sq = 0.0;
  for (double v : value) {
    if (std::isnan(v)) {
      ++est.skipped;
      continue;
    }
    ++est.used;
    sum += v;
    sq += v * v;
  }
  if (est.used == 0) fail(ErrorKind::DegenerateInput, "every sample was numerically defective");
  est.mean = sum / est.used;
  if (est.used > 1) {
    const double var = std::max(0.0, (sq - est.used * est.mean * est.mean) / (est.used - 1));
    est.stdErr = std::sqrt(var / est.used);
  }
  return est;
}

}  // namespace pindex

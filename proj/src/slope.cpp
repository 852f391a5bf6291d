// SPDX-License-Identifier: Apache-2.0

#include "pindex/slope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pindex/error.hpp"

namespace pindex {
namespace {

bool usable(double v) { return std::isfinite(v) && v > 0.0; }

struct Run {
  SlopeLabel label;
  std::size_t first;  // window index range [first, last]
  std::size_t last;
};

}  // namespace

std::string to_string(SlopeLabel l) {
  switch (l) {
    case SlopeLabel::Flat: return "Flat";
    case SlopeLabel::Half: return "Half";
    case SlopeLabel::One: return "One";
    case SlopeLabel::Noise: return "Noise";
  }
  return "Noise";
}

std::string to_string(IndexClass c) {
  switch (c) {
    case IndexClass::Index1: return "Index1";
    case IndexClass::Index2: return "Index2";
    case IndexClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

double SlopeSegment::decades() const { return std::log10(tauEnd) - std::log10(tauStart); }

std::vector<SlopePoint> fit_loglog_slopes(std::span<const double> tau, std::span<const double> value, int window) {
  if (tau.size() != value.size()) fail(ErrorKind::InvalidInput, "tau and value differ in length");
  if (window < 4) fail(ErrorKind::InvalidInput, "slope window must be at least 4 points");
  const std::size_t w = static_cast<std::size_t>(window);
  std::vector<SlopePoint> out;
  if (tau.size() < w) fail(ErrorKind::TooFewPoints, "curve shorter than the slope window");

  for (std::size_t s = 0; s + w <= tau.size(); ++s) {
    bool ok = true;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = s; i < s + w && ok; ++i) {
      ok = usable(tau[i]) && usable(value[i]);
      if (ok) {
        mx += std::log10(tau[i]);
        my += std::log10(value[i]);
      }
    }
    if (!ok) continue;
    mx /= w;
    my /= w;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = s; i < s + w; ++i) {
      const double dx = std::log10(tau[i]) - mx;
      sxy += dx * (std::log10(value[i]) - my);
      sxx += dx * dx;
    }
    if (sxx <= 0.0) continue;
    out.push_back({std::pow(10.0, mx), sxy / sxx});
  }
  if (out.empty()) fail(ErrorKind::TooFewPoints, "no complete window without gaps");
  return out;
}

SlopeLabel label_for(double slope, double tol) {
  if (std::abs(slope - 0.5) <= tol) return SlopeLabel::Half;
  if (std::abs(slope - 1.0) <= tol) return SlopeLabel::One;
  if (std::abs(slope) <= tol) return SlopeLabel::Flat;
  return SlopeLabel::Noise;
}

std::vector<SlopeSegment> segment_regions(std::span<const SlopePoint> slopes, const SegmentOptions &opt) {
  if (slopes.empty()) return {};
  const std::size_t m = slopes.size();

  // cell edges in log10(tau)
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = std::log10(slopes[i].tauCenter);
  std::vector<double> edge(m + 1);
  for (std::size_t i = 1; i < m; ++i) edge[i] = 0.5 * (x[i - 1] + x[i]);
  const double h0 = m > 1 ? x[1] - x[0] : 0.5;
  const double h1 = m > 1 ? x[m - 1] - x[m - 2] : 0.5;
  edge[0] = x[0] - 0.5 * h0;
  edge[m] = x[m - 1] + 0.5 * h1;

  std::vector<Run> runs;
  for (std::size_t i = 0; i < m; ++i) {
    const SlopeLabel l = label_for(slopes[i].slope, opt.slopeTol);
    if (!runs.empty() && runs.back().label == l) runs.back().last = i;
    else runs.push_back({l, i, i});
  }
  auto span = [&](const Run &r) { return edge[r.last + 1] - edge[r.first]; };
  auto merge_equal = [&] {
    std::vector<Run> merged;
    for (const Run &r : runs) {
      if (!merged.empty() && merged.back().label == r.label) merged.back().last = r.last;
      else merged.push_back(r);
    }
    runs.swap(merged);
  };

  while (runs.size() > 1) {
    std::size_t k = runs.size();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (span(runs[i]) >= opt.minDecades) continue;
      if (k == runs.size() || span(runs[i]) < span(runs[k])) k = i;
    }
    if (k == runs.size()) break;
    std::size_t into;
    if (k == 0) into = 1;
    else if (k + 1 == runs.size()) into = k - 1;
    else into = span(runs[k - 1]) >= span(runs[k + 1]) ? k - 1 : k + 1;
    runs[into].first = std::min(runs[into].first, runs[k].first);
    runs[into].last = std::max(runs[into].last, runs[k].last);
    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(k));
    merge_equal();
  }

  std::vector<SlopeSegment> out;
  out.reserve(runs.size());
  for (const Run &r : runs) {
    SlopeSegment s;
    s.label = r.label;
    s.tauStart = std::pow(10.0, edge[r.first]);
    s.tauEnd = std::pow(10.0, edge[r.last + 1]);
    s.windows = static_cast<int>(r.last - r.first + 1);
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
      sum += slopes[i].slope;
      sq += slopes[i].slope * slopes[i].slope;
    }
    s.slope = sum / s.windows;
    if (s.windows > 1) {
      const double var = std::max(0.0, (sq - s.windows * s.slope * s.slope) / (s.windows - 1));
      s.slopeStdErr = std::sqrt(var / s.windows);
    }
    out.push_back(s);
  }
  return out;
}

IndexVerdict classify_index(std::span<const SlopeSegment> segments, const CurveMarkers &markers,
                            double min_decades, std::span<const SlopePoint> slopes) {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  if (markers.delta && *markers.delta > 0.0) lo = std::max(lo, *markers.delta);
  if (markers.turningPoint) lo = std::max(lo, *markers.turningPoint);
  if (markers.tau0 && std::isfinite(*markers.tau0) && *markers.tau0 > 0.0) hi = *markers.tau0;

  auto clipped_decades = [&](const SlopeSegment &s) {
    const double a = std::max(s.tauStart, lo);
    const double b = std::min(s.tauEnd, hi);
    return b > a ? std::log10(b) - std::log10(a) : 0.0;
  };

  IndexVerdict v;
  std::ostringstream notes;
  std::optional<std::size_t> best;
  double best_span = 0.0;
  bool one_qualifies = false;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double d = clipped_decades(segments[i]);
    if (d < min_decades) continue;
    if (segments[i].label == SlopeLabel::Half && d > best_span) {
      best = i;
      best_span = d;
    }
    if (segments[i].label == SlopeLabel::One) one_qualifies = true;
  }

  if (best) {
    v.verdict = IndexClass::Index2;
    v.halfPlateau = segments[*best];
    notes << "slope 1/2 over " << best_span << " decades inside the marker window";
  } else if (one_qualifies) {
    v.verdict = IndexClass::Index1;
    notes << "slope 1 plateau, no slope 1/2 plateau";
  } else {
    notes << "no plateau of " << min_decades << " decades inside the marker window";
  }

  // The slope-1 region below the plateau (or, without a plateau, the lowest
  // slope-1 region) and where it gives way to smaller slopes.
  std::optional<std::size_t> low_one;
  if (best) {
    if (*best > 0 && segments[*best - 1].label == SlopeLabel::One) low_one = *best - 1;
  } else {
    for (std::size_t i = 0; i < segments.size() && !low_one; ++i) {
      if (segments[i].label == SlopeLabel::Half) break;
      if (segments[i].label == SlopeLabel::One) low_one = i;
    }
  }
  if (low_one) {
    const SlopeSegment &s = segments[*low_one];
    v.crossoverTau = best ? segments[*best].tauStart : s.tauEnd;
    // refine: first window past the start of the region whose slope is nearer 1/2 than 1
    for (std::size_t i = 1; i < slopes.size(); ++i) {
      if (slopes[i].tauCenter < s.tauStart) continue;
      if (slopes[i].slope < 0.75 && slopes[i - 1].slope >= 0.75) {
        v.crossoverTau = std::sqrt(slopes[i - 1].tauCenter * slopes[i].tauCenter);
        break;
      }
    }
    notes << "; slope 1 below tau = " << *v.crossoverTau
          << " (a larger value suggests a larger distance to index-2 pencils)";
  }
  v.notes = notes.str();
  return v;
}

IndexVerdict classify_curve(std::span<const double> tau, std::span<const double> value, const CurveMarkers &markers,
                            int window, const SegmentOptions &opt) {
  const auto slopes = fit_loglog_slopes(tau, value, window);
  const auto segs = segment_regions(slopes, opt);
  return classify_index(segs, markers, opt.minDecades, slopes);
}

}  // namespace pindex

// SPDX-License-Identifier: Apache-2.0

#pragma once

// Log-log slope fitting, segmentation into slope regions and the index verdict.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pindex {

struct SlopePoint {
  double tauCenter = 0.0;
  double slope = 0.0;
};

/// Least-squares slope of log10(value) against log10(tau) over every run of
/// `window` consecutive grid points. Windows touching a gap (NaN, inf or a
/// nonpositive value) are skipped.
std::vector<SlopePoint> fit_loglog_slopes(std::span<const double> tau, std::span<const double> value,
                                          int window = 9);

enum class SlopeLabel { Flat, Half, One, Noise };
std::string to_string(SlopeLabel l);

struct SlopeSegment {
  double tauStart = 0.0;
  double tauEnd = 0.0;
  double slope = 0.0;
  double slopeStdErr = 0.0;
  SlopeLabel label = SlopeLabel::Noise;
  int windows = 0;

  double decades() const;
};

struct SegmentOptions {
  double slopeTol = 0.1;
  double minDecades = 1.5;
};

SlopeLabel label_for(double slope, double slope_tol);

/// Consecutive windows with the same label form a segment; each window owns
/// the log-interval between the midpoints to its neighbours. Segments shorter
/// than minDecades are absorbed into their longer neighbour, shortest first.
std::vector<SlopeSegment> segment_regions(std::span<const SlopePoint> slopes, const SegmentOptions &opt = {});

enum class IndexClass { Index1, Index2, Inconclusive };
std::string to_string(IndexClass c);

/// Curve markers bounding the readable tau range. Unset markers do not clip.
struct CurveMarkers {
  std::optional<double> delta;
  std::optional<double> tau0;
  std::optional<double> turningPoint;
};

struct IndexVerdict {
  IndexClass verdict = IndexClass::Inconclusive;
  std::optional<SlopeSegment> halfPlateau;
  std::optional<double> crossoverTau;
  std::string notes;
};

/// Index2 when a Half segment spans min_decades inside (max(delta, turning
/// point), tau0); Index1 when only One segments do. crossoverTau is where the
/// slope-1 region below the plateau ends, located on the window slopes (first
/// drop below 3/4) when they are supplied and at the segment boundary otherwise.
IndexVerdict classify_index(std::span<const SlopeSegment> segments, const CurveMarkers &markers,
                            double min_decades = 1.5, std::span<const SlopePoint> slopes = {});

/// fit + segment + classify in one call.
IndexVerdict classify_curve(std::span<const double> tau, std::span<const double> value, const CurveMarkers &markers,
                            int window = 9, const SegmentOptions &opt = {});

}  // namespace pindex

// SPDX-License-Identifier: Apache-2.0

#pragma once

// Matrix Market ingestion, curve serialization (CSV / JSON), gnuplot script
// emission and run manifests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pindex/curve.hpp"
#include "pindex/grid.hpp"
#include "pindex/numkernel.hpp"
#include "pindex/slope.hpp"

namespace pindex {

struct RandomizedCurve;
struct SweepCurve;

inline constexpr Eigen::Index kDefaultDimensionLimit = 2000;

/// Matrix Market array or coordinate file; real, integer, pattern or complex
/// field; general, symmetric, hermitian or skew-symmetric storage.
ComplexDense read_matrix(const std::filesystem::path &path, Eigen::Index max_dim = kDefaultDimensionLimit);

/// Array format, real field when every imaginary part is zero. Values are
/// printed with 17 significant digits and reread exactly.
void write_matrix(const std::filesystem::path &path, const ComplexDense &m);

enum class CurveFormat { CSV, JSON };

/// Serialization-level view of either curve kind.
struct CurveRecord {
  std::vector<double> tau;
  std::vector<double> value;
  std::vector<double> lower;  // empty when the curve has no envelope / band
  std::vector<double> upper;
  double delta = kMissing;
  double tau0 = kMissing;
  std::optional<double> turningPoint;
  Eigen::MatrixXd perSample;  // randomized curves only
  CurveMetadata metadata;
};

CurveRecord to_record(const SweepCurve &c);
CurveRecord to_record(const RandomizedCurve &c);

void write_curve(const CurveRecord &c, const std::filesystem::path &path, CurveFormat format);
void write_curve(const SweepCurve &c, const std::filesystem::path &path, CurveFormat format);
void write_curve(const RandomizedCurve &c, const std::filesystem::path &path, CurveFormat format);

CurveRecord read_curve_json(const std::filesystem::path &path);

/// Markers that bound the readable range of a stored curve: the turning point
/// for randomized curves; delta (unless the regime does not need tau > delta)
/// and a finite tau0 for deterministic ones.
CurveMarkers markers_for(const CurveRecord &c);

/// One panel of a gnuplot script; `csv` is referenced relative to the script.
struct PlotPanel {
  std::string csv;
  std::string title;
  bool bounds = false;
  std::optional<double> deltaMarker;
  std::optional<double> tau0Marker;
  std::string ylabel = "1/|lambda(tau)|";
};

/// Log-log panels side by side: curve solid, bounds dash-dot, delta marker
/// dashed purple, tau0 marker dotted red.
void emit_plot_script(const std::vector<PlotPanel> &panels, const std::filesystem::path &path,
                      const std::string &image = "figure.png");

struct RunManifest {
  std::string command;
  std::vector<std::string> args;  // argument vector after the program name
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::optional<std::string> createdAt;
};

void write_manifest(const RunManifest &m, const std::filesystem::path &path);
RunManifest read_manifest(const std::filesystem::path &path);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);

}  // namespace pindex

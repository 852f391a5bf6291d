// SPDX-License-Identifier: Apache-2.0

#include "pindex/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "pindex/randomized.hpp"
#include "pindex/sweep.hpp"

namespace pindex {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_error(const fs::path &path, std::size_t line, const std::string &msg) {
  fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_marker(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

double from_json_number(const json &j) {
  if (j.is_null()) return kMissing;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(ErrorKind::ParseError, "unexpected string '" + s + "' in numeric field");
  }
  return j.get<double>();
}

json vector_json(const std::vector<double> &v) {
  json a = json::array();
  for (double x : v) a.push_back(number_or_marker(x));
  return a;
}

std::vector<double> vector_from(const json &j) {
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto &x : j) v.push_back(from_json_number(x));
  return v;
}

std::string csv_cell(const std::vector<double> &v, std::size_t i) {
  if (i >= v.size() || std::isnan(v[i])) return "";
  return fmt17(v[i]);
}

}  // namespace

void write_file_atomic(const fs::path &path, const std::string &contents) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::IOError, "cannot open " + tmp.string() + " for writing");
    os << contents;
    os.flush();
    if (!os) fail(ErrorKind::IOError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::IOError, "cannot move output into place at " + path.string());
  }
}

ComplexDense read_matrix(const fs::path &path, Eigen::Index max_dim) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IOError, "cannot open " + path.string());

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_error(path, 1, "empty file");
  ++lineno;
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") parse_error(path, lineno, "missing %%MatrixMarket matrix header");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") parse_error(path, lineno, "unknown format '" + format + "'");
  if (field != "real" && field != "integer" && field != "complex" && field != "pattern" && field != "double")
    parse_error(path, lineno, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric")
    parse_error(path, lineno, "unsupported symmetry '" + symmetry + "'");
  if (field == "pattern" && format == "array") parse_error(path, lineno, "pattern field requires coordinate format");
  if (symmetry == "hermitian" && field != "complex") symmetry = "symmetric";
  const bool complex_field = field == "complex";

  // size line, skipping comments and blank lines
  auto next_data_line = [&](std::string &out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto p = out.find_first_not_of(" \t\r");
      if (p == std::string::npos || out[p] == '%') continue;
      return true;
    }
    return false;
  };
  if (!next_data_line(line)) parse_error(path, lineno + 1, "missing size line");
  std::istringstream ss(line);
  long long rows = -1, cols = -1, nnz = -1;
  ss >> rows >> cols;
  if (format == "coordinate") ss >> nnz;
  if (!ss || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0)) parse_error(path, lineno, "malformed size line");
  if (rows > max_dim || cols > max_dim)
    fail(ErrorKind::DimensionLimit, path.string() + ": " + std::to_string(rows) + "x" + std::to_string(cols) +
                                        " exceeds the limit of " + std::to_string(max_dim));
  if (symmetry != "general" && rows != cols) parse_error(path, lineno, "symmetric storage needs a square matrix");

  ComplexDense m = ComplexDense::Zero(rows, cols);
  auto place = [&](long long i, long long j, Complex v) {
    m(i, j) += v;
    if (i == j) return;
    if (symmetry == "symmetric") m(j, i) += v;
    else if (symmetry == "hermitian") m(j, i) += std::conj(v);
    else if (symmetry == "skew-symmetric") m(j, i) -= v;
  };
  auto read_value = [&](std::istringstream &ls) {
    double re = 1.0, im = 0.0;
    if (field != "pattern") ls >> re;
    if (complex_field) ls >> im;
    if (!ls) parse_error(path, lineno, "malformed entry");
    if (!std::isfinite(re) || !std::isfinite(im)) parse_error(path, lineno, "non-finite entry");
    return Complex(re, im);
  };

  if (format == "array") {
    // column-major; symmetric kinds store the lower triangle only
    for (long long j = 0; j < cols; ++j) {
      const long long start = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (long long i = start; i < rows; ++i) {
        if (!next_data_line(line)) parse_error(path, lineno + 1, "unexpected end of file");
        std::istringstream ls(line);
        place(i, j, read_value(ls));
      }
    }
  } else {
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(line)) parse_error(path, lineno + 1, "unexpected end of file");
      std::istringstream ls(line);
      long long i = 0, j = 0;
      ls >> i >> j;
      if (!ls || i < 1 || j < 1 || i > rows || j > cols) parse_error(path, lineno, "index out of range");
      const Complex v = read_value(ls);
      if (symmetry != "general" && j > i) parse_error(path, lineno, "entry above the diagonal in symmetric storage");
      place(i - 1, j - 1, v);
    }
  }
  if (next_data_line(line)) parse_error(path, lineno, "trailing data");
  return m;
}

void write_matrix(const fs::path &path, const ComplexDense &m) {
  const bool real = m.imag().isZero(0.0);
  std::ostringstream os;
  os << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      os << fmt17(m(i, j).real());
      if (!real) os << ' ' << fmt17(m(i, j).imag());
      os << '\n';
    }
  write_file_atomic(path, os.str());
}

CurveRecord to_record(const SweepCurve &c) {
  CurveRecord r;
  r.tau = c.tau;
  r.value = c.value;
  r.lower = c.lowerEnv;
  r.upper = c.upperEnv;
  r.delta = c.delta;
  r.tau0 = c.tau0;
  r.metadata = c.metadata;
  return r;
}

CurveRecord to_record(const RandomizedCurve &c) {
  CurveRecord r;
  r.tau = c.tau;
  r.value = c.meanMinAbs;
  r.lower = c.bandLower;
  r.upper = c.bandUpper;
  r.delta = c.deltaNorm;
  r.turningPoint = c.turningPointTau;
  r.perSample = c.perSampleMinAbs;
  r.metadata = c.metadata;
  return r;
}

void write_curve(const CurveRecord &c, const fs::path &path, CurveFormat format) {
  if (c.value.size() != c.tau.size()) fail(ErrorKind::InvalidInput, "curve arrays differ in length");
  if (format == CurveFormat::CSV) {
    std::ostringstream os;
    os << "tau,value,lower,upper\n";
    for (std::size_t i = 0; i < c.tau.size(); ++i)
      os << fmt17(c.tau[i]) << ',' << csv_cell(c.value, i) << ',' << csv_cell(c.lower, i) << ','
         << csv_cell(c.upper, i) << '\n';
    write_file_atomic(path, os.str());
    return;
  }

  json meta;
  meta["method"] = c.metadata.method;
  meta["source"] = c.metadata.source;
  meta["regime"] = c.metadata.regime;
  meta["h"] = c.metadata.h ? json(*c.metadata.h) : json(nullptr);
  meta["scale"] = c.metadata.scale;
  meta["seed"] = c.metadata.seed;
  meta["kappaVEstimator"] = c.metadata.kappaVEstimator;
  meta["notes"] = c.metadata.notes;

  json j;
  j["tau"] = vector_json(c.tau);
  j["value"] = vector_json(c.value);
  j["lower"] = vector_json(c.lower);
  j["upper"] = vector_json(c.upper);
  j["delta"] = number_or_marker(c.delta);
  j["tau0"] = number_or_marker(c.tau0);
  j["turningPoint"] = c.turningPoint ? number_or_marker(*c.turningPoint) : json(nullptr);
  if (c.perSample.size() > 0) {
    json rows = json::array();
    for (Eigen::Index s = 0; s < c.perSample.rows(); ++s) {
      json row = json::array();
      for (Eigen::Index i = 0; i < c.perSample.cols(); ++i) row.push_back(number_or_marker(c.perSample(s, i)));
      rows.push_back(std::move(row));
    }
    j["perSample"] = std::move(rows);
  }
  j["metadata"] = std::move(meta);
  write_file_atomic(path, j.dump(1) + "\n");
}

void write_curve(const SweepCurve &c, const fs::path &path, CurveFormat format) {
  write_curve(to_record(c), path, format);
}

void write_curve(const RandomizedCurve &c, const fs::path &path, CurveFormat format) {
  write_curve(to_record(c), path, format);
}

CurveRecord read_curve_json(const fs::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IOError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  CurveRecord r;
  try {
    r.tau = vector_from(j.at("tau"));
    r.value = vector_from(j.at("value"));
    if (j.contains("lower")) r.lower = vector_from(j["lower"]);
    if (j.contains("upper")) r.upper = vector_from(j["upper"]);
    if (j.contains("delta")) r.delta = from_json_number(j["delta"]);
    if (j.contains("tau0")) r.tau0 = from_json_number(j["tau0"]);
    if (j.contains("turningPoint") && !j["turningPoint"].is_null()) r.turningPoint = from_json_number(j["turningPoint"]);
    if (j.contains("perSample")) {
      const auto &rows = j["perSample"];
      const auto ns = static_cast<Eigen::Index>(rows.size());
      const auto nt = ns > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
      r.perSample.resize(ns, nt);
      for (Eigen::Index s = 0; s < ns; ++s) {
        if (static_cast<Eigen::Index>(rows[s].size()) != nt) fail(ErrorKind::ParseError, "ragged perSample matrix");
        for (Eigen::Index i = 0; i < nt; ++i) r.perSample(s, i) = from_json_number(rows[s][i]);
      }
    }
    if (j.contains("metadata")) {
      const auto &m = j["metadata"];
      r.metadata.method = m.value("method", "");
      r.metadata.source = m.value("source", "");
      r.metadata.regime = m.value("regime", "none");
      if (m.contains("h") && !m["h"].is_null()) r.metadata.h = m["h"].get<double>();
      r.metadata.scale = m.value("scale", 1.0);
      r.metadata.seed = m.value("seed", std::uint64_t{0});
      r.metadata.kappaVEstimator = m.value("kappaVEstimator", r.metadata.kappaVEstimator);
      if (m.contains("notes")) r.metadata.notes = m["notes"].get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception &e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  if (r.tau.size() != r.value.size()) fail(ErrorKind::ParseError, path.string() + ": tau and value differ in length");
  return r;
}

CurveMarkers markers_for(const CurveRecord &c) {
  CurveMarkers m;
  if (c.metadata.method == "method2") {
    m.turningPoint = c.turningPoint;
    return m;
  }
  if (c.metadata.regime != "CorDeltaE0" && std::isfinite(c.delta) && c.delta > 0.0) m.delta = c.delta;
  if (std::isfinite(c.tau0) && c.tau0 > 0.0) m.tau0 = c.tau0;
  return m;
}

void emit_plot_script(const std::vector<PlotPanel> &panels, const fs::path &path, const std::string &image) {
  if (panels.empty()) fail(ErrorKind::InvalidInput, "no panels to plot");
  std::ostringstream os;
  os << "# gnuplot script; run with: gnuplot " << path.filename().string() << "\n";
  os << "set terminal pngcairo size " << 520 * panels.size() << ",420\n";
  os << "set output '" << image << "'\n";
  os << "set datafile separator ','\n";
  os << "set logscale xy\n";
  os << "set format x '10^{%L}'\n";
  os << "set format y '10^{%L}'\n";
  os << "set xlabel 'tau'\n";
  os << "set key top left\n";
  if (panels.size() > 1) os << "set multiplot layout 1," << panels.size() << "\n";
  for (const PlotPanel &p : panels) {
    os << "set title '" << p.title << "'\n";
    os << "set ylabel '" << p.ylabel << "'\n";
    if (p.deltaMarker)
      os << "set arrow from " << fmt17(*p.deltaMarker) << ", graph 0 to " << fmt17(*p.deltaMarker)
         << ", graph 1 nohead dt 2 lw 1.5 lc rgb 'purple'\n";
    if (p.tau0Marker)
      os << "set arrow from " << fmt17(*p.tau0Marker) << ", graph 0 to " << fmt17(*p.tau0Marker)
         << ", graph 1 nohead dt 3 lw 1.5 lc rgb 'red'\n";
    os << "plot '" << p.csv << "' using 1:2 with lines lw 2 lc rgb 'black' title 'curve'";
    if (p.bounds) {
      os << ", \\\n     '' using 1:3 with lines dt '-.' lc rgb 'blue' title 'lower'";
      os << ", \\\n     '' using 1:4 with lines dt '-.' lc rgb 'blue' title 'upper'";
    }
    os << "\n";
    if (p.deltaMarker || p.tau0Marker) os << "unset arrow\n";
  }
  if (panels.size() > 1) os << "unset multiplot\n";
  write_file_atomic(path, os.str());
}

void write_manifest(const RunManifest &m, const fs::path &path) {
  json j;
  j["command"] = m.command;
  j["args"] = m.args;
  j["inputs"] = m.inputs;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["outputs"] = m.outputs;
  if (m.createdAt) j["createdAt"] = *m.createdAt;
  write_file_atomic(path, j.dump(1) + "\n");
}

RunManifest read_manifest(const fs::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IOError, "cannot open " + path.string());
  RunManifest m;
  try {
    json j;
    in >> j;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.inputs = j.value("inputs", std::map<std::string, std::string>{});
    m.config = j.value("config", std::map<std::string, std::string>{});
    m.seed = j.value("seed", std::uint64_t{0});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    if (j.contains("createdAt")) m.createdAt = j["createdAt"].get<std::string>();
  } catch (const json::exception &e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return m;
}

}  // namespace pindex

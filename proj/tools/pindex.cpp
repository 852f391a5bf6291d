// SPDX-License-Identifier: Apache-2.0
//
// pindex: command-line front end. Exit codes: 0 ok, 2 input error, 3 numerical failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pindex/bench.hpp"
#include "pindex/io.hpp"
#include "pindex/randomized.hpp"
#include "pindex/slope.hpp"
#include "pindex/sweep.hpp"

namespace fs = std::filesystem;
using namespace pindex;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Options {
  double tauMin = 1e-20;
  double tauMax = 1e2;
  std::size_t points = 150;
  double delta = std::exp(-15.0);
  std::uint64_t seed = 0;
  int samples = 10;
  double h = 1.0;
  double scale = 1.0;
  std::optional<double> rankTol;
  std::string regime = "auto";
  std::string format = "both";
  std::string out = ".";
  bool timestamp = false;

  std::string E, A, J, R, Q, M, in;
  std::string family;
  Eigen::Index n = 0;  // 0: family default
  std::string methods = "12";
  bool resample = false;
  int window = 9;
  double slopeTol = 0.1;
  double minDecades = 1.5;
  std::string manifest;
  bool verbose = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> grid_of(const Options &o) { return log_grid(o.tauMin, o.tauMax, o.points); }

/// Returns regime override: nullopt means no envelope.
std::optional<EnvelopeRegime> regime_of(const Options &o, EnvelopeRegime fallback) {
  if (o.regime == "auto") return fallback;
  if (o.regime == "none") return std::nullopt;
  if (auto r = envelope_regime_from_string(o.regime)) return r;
  fail(ErrorKind::InvalidInput, "unknown regime '" + o.regime + "'");
}

class Outputs {
public:
  Outputs(const Options &o, std::string command, std::vector<std::string> args)
      : opt_(o), dir_(o.out) {
    manifest_.command = std::move(command);
    manifest_.args = std::move(args);
    manifest_.seed = o.seed;
    if (o.format != "csv" && o.format != "json" && o.format != "both")
      fail(ErrorKind::InvalidInput, "--format must be csv, json or both");
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorKind::IOError, "cannot create output directory " + dir_.string());
    config("tauMin", fmt(o.tauMin));
    config("tauMax", fmt(o.tauMax));
    config("points", std::to_string(o.points));
    config("delta", fmt(o.delta));
    config("scale", fmt(o.scale));
    config("regime", o.regime);
    if (o.rankTol) config("rankTol", fmt(*o.rankTol));
  }

  void input(const std::string &k, const std::string &v) { manifest_.inputs[k] = v; }
  void config(const std::string &k, const std::string &v) { manifest_.config[k] = v; }

  /// Writes the curve in the requested formats and returns the CSV name for plotting.
  template <typename Curve>
  std::string curve(const Curve &c, const std::string &stem) {
    const std::string csv = stem + ".csv";
    // CSV always: the plot script reads it
    write_curve(c, dir_ / csv, CurveFormat::CSV);
    manifest_.outputs.push_back(csv);
    if (opt_.format != "csv") {
      write_curve(c, dir_ / (stem + ".json"), CurveFormat::JSON);
      manifest_.outputs.push_back(stem + ".json");
    }
    return csv;
  }

  void plot(const std::vector<PlotPanel> &panels) {
    emit_plot_script(panels, dir_ / "plot.gp");
    manifest_.outputs.push_back("plot.gp");
  }

  void finish() {
    if (opt_.timestamp) {
      const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
      manifest_.createdAt = buf;
    }
    manifest_.outputs.push_back("manifest.json");
    write_manifest(manifest_, dir_ / "manifest.json");
  }

private:
  const Options &opt_;
  fs::path dir_;
  RunManifest manifest_;
};

PlotPanel sweep_panel(const SweepCurve &c, const std::string &csv, const std::string &title) {
  PlotPanel p;
  p.csv = csv;
  p.title = title;
  p.bounds = c.has_envelope();
  const CurveMarkers m = markers_for(to_record(c));
  if (p.bounds) {
    p.deltaMarker = m.delta;
    p.tau0Marker = m.tau0;
  }
  return p;
}

PlotPanel randomized_panel(const RandomizedCurve &c, const std::string &csv, const std::string &title) {
  PlotPanel p;
  p.csv = csv;
  p.title = title;
  p.bounds = true;
  p.ylabel = "mean min |lambda(M + tau G)|";
  return p;
}

Pencil load_pencil(const Options &o, Outputs &out) {
  if (o.E.empty() || o.A.empty()) fail(ErrorKind::InvalidInput, "--E and --A are required");
  out.input("E", o.E);
  out.input("A", o.A);
  return Pencil(read_matrix(o.E), read_matrix(o.A));
}

SweepConfig sweep_config(const Options &o, std::optional<EnvelopeRegime> regime) {
  SweepConfig cfg;
  cfg.tauGrid = grid_of(o);
  cfg.delta = o.delta;
  cfg.scale = o.scale;
  cfg.rankTol = o.rankTol;
  cfg.envelopeRegime = regime;
  return cfg;
}

RandomizedCurve method2(const Pencil &p, const Options &o, Outputs &out) {
  const Pencil scaled = o.scale == 1.0 ? p : p.scaled(o.scale);
  const CayleyResult cr = cayley_with_fallback(scaled, o.h);
  GinibreConfig g;
  g.n = p.size();
  g.samples = o.samples;
  g.seed = o.seed;
  g.tauGrid = grid_of(o);
  g.deltaNorm = o.delta;
  g.resamplePerTau = o.resample;
  RandomizedCurve c = run_randomized_sweep(normalize_for_ginibre(cr.Mh), g);
  c.metadata.h = cr.h;
  c.metadata.scale = o.scale;
  out.config("h", fmt(cr.h));
  out.config("samples", std::to_string(o.samples));
  return c;
}

int cmd_structure(const Options &o) {
  if (o.E.empty() || o.A.empty()) fail(ErrorKind::InvalidInput, "--E and --A are required");
  Pencil p(read_matrix(o.E), read_matrix(o.A));
  if (o.scale != 1.0) p = p.scaled(o.scale);
  const BlockForm b = project_blocks(p, o.rankTol);
  const StructureReport r = check_index2_structure(b);
  std::cout << "n " << p.size() << "\n"
            << "n1 " << b.n1 << "\n"
            << "rankTol " << fmt(b.rankTol) << "\n"
            << "a22Norm " << fmt(r.a22Norm) << "\n"
            << "a12FullColumnRank " << (r.a12FullColumnRank ? "true" : "false") << "\n"
            << "a21FullRowRank " << (r.a21FullRowRank ? "true" : "false") << "\n"
            << "e11SigmaMin " << fmt(r.e11SigmaMin) << "\n"
            << "tol " << fmt(r.tol) << "\n"
            << "verdict " << to_string(r.verdict) << "\n";
  return 0;
}

int cmd_sweep(const Options &o, const std::vector<std::string> &args) {
  Outputs out(o, "sweep", args);
  SweepCurve c;
  if (!o.J.empty()) {
    if (o.E.empty()) fail(ErrorKind::InvalidInput, "--E is required with --J");
    PHPencil ph;
    ph.E = read_matrix(o.E);
    ph.J = read_matrix(o.J);
    const auto n = ph.E.rows();
    ph.R = o.R.empty() ? ComplexDense::Zero(n, n) : read_matrix(o.R);
    ph.Q = o.Q.empty() ? ComplexDense::Identity(n, n) : read_matrix(o.Q);
    out.input("E", o.E);
    out.input("J", o.J);
    if (!o.R.empty()) out.input("R", o.R);
    if (!o.Q.empty()) out.input("Q", o.Q);
    c = run_sweep(ph, sweep_config(o, regime_of(o, EnvelopeRegime::CorPH_QI)));
    c.metadata.source = "file (pH)";
  } else {
    const Pencil p = load_pencil(o, out);
    c = run_sweep(p, sweep_config(o, regime_of(o, EnvelopeRegime::Thm1)));
    c.metadata.source = "file";
  }
  const std::string csv = out.curve(c, "method1");
  out.plot({sweep_panel(c, csv, "Method 1")});
  out.finish();
  return 0;
}

int cmd_randomized(const Options &o, const std::vector<std::string> &args) {
  Outputs out(o, "randomized", args);
  RandomizedCurve c;
  if (!o.M.empty()) {
    out.input("M", o.M);
    const ComplexDense m = read_matrix(o.M);
    GinibreConfig g;
    g.n = m.rows();
    g.samples = o.samples;
    g.seed = o.seed;
    g.tauGrid = grid_of(o);
    g.deltaNorm = o.delta;
    g.resamplePerTau = o.resample;
    c = run_randomized_sweep(m, g);
    c.metadata.source = "file (M)";
  } else {
    c = method2(load_pencil(o, out), o, out);
    c.metadata.source = "file";
  }
  const std::string csv = out.curve(c, "method2");
  out.plot({randomized_panel(c, csv, "Method 2")});
  out.finish();
  return 0;
}

int cmd_classify(const Options &o) {
  if (o.in.empty()) fail(ErrorKind::InvalidInput, "--in is required");
  const CurveRecord r = read_curve_json(o.in);
  const SegmentOptions so{o.slopeTol, o.minDecades};
  const auto slopes = fit_loglog_slopes(r.tau, r.value, o.window);
  const auto segments = segment_regions(slopes, so);
  const IndexVerdict v = classify_index(segments, markers_for(r), so.minDecades, slopes);
  std::cout << to_string(v.verdict) << "\n";
  if (o.verbose) {
    for (const auto &s : segments)
      std::cerr << to_string(s.label) << " [" << s.tauStart << ", " << s.tauEnd << "] slope " << s.slope << " +- "
                << s.slopeStdErr << "\n";
    if (v.crossoverTau) std::cerr << "crossover " << *v.crossoverTau << "\n";
    std::cerr << v.notes << "\n";
  }
  return 0;
}

int cmd_bench(const Options &o, const std::vector<std::string> &args, bool delta_given) {
  Outputs out(o, "bench", args);
  out.input("family", o.family);
  out.config("methods", o.methods);
  const bool m1 = o.methods.find('1') != std::string::npos;
  const bool m2 = o.methods.find('2') != std::string::npos;
  std::vector<PlotPanel> panels;

  auto both_methods = [&](const Pencil &p, std::optional<EnvelopeRegime> regime, const std::string &label) {
    if (m1) {
      SweepCurve c = run_sweep(p, sweep_config(o, regime));
      c.metadata.source = label;
      c.metadata.seed = o.seed;
      panels.push_back(sweep_panel(c, out.curve(c, "method1"), label + ": Method 1"));
    }
    if (m2) {
      RandomizedCurve c = method2(p, o, out);
      c.metadata.source = label;
      panels.push_back(randomized_panel(c, out.curve(c, "method2"), label + ": Method 2"));
    }
  };

  const Eigen::Index toy_n = o.n > 0 ? o.n : 100;
  if (o.family == "toy" || o.family == "congruence") {
    out.config("n", std::to_string(toy_n));
    CounterRng rng(o.seed, 0);
    Pencil p = gen_toy(toy_n, rng);
    if (o.family == "congruence") {
      CounterRng srng(o.seed, 1);
      p = gen_congruence(p, srng);
    }
    both_methods(p, regime_of(o, EnvelopeRegime::Thm1), o.family);
  } else if (o.family == "strings-a" || o.family == "strings-b") {
    const bool a = o.family == "strings-a";
    const Eigen::Index n = o.n > 0 ? o.n : 10;
    out.config("n", std::to_string(n));
    const StringsParams sp = a ? StringsParams::case_a(n, std::exp(-15.0)) : StringsParams::case_b(n, std::exp(-15.0));
    const PHPencil ph = gen_strings(sp);
    Options o1 = o;
    if (!delta_given) o1.delta = 3.0 * sp.eps;  // three perturbed coefficients
    if (m1) {
      // case B is index one: no index-two envelope
      SweepCurve c = run_sweep(ph, sweep_config(o1, a ? regime_of(o, EnvelopeRegime::CorPH_Qweighted) : std::nullopt));
      c.metadata.source = o.family;
      panels.push_back(sweep_panel(c, out.curve(c, "method1"), o.family + ": Method 1"));
    }
    if (m2) {
      RandomizedCurve c = method2(ph.as_pencil(), o, out);
      c.metadata.source = o.family;
      panels.push_back(randomized_panel(c, out.curve(c, "method2"), o.family + ": Method 2"));
    }
  } else if (o.family == "deltas") {
    out.config("n", std::to_string(toy_n));
    CounterRng rng(o.seed, 0);
    const Pencil p = gen_toy(toy_n, rng);
    const std::vector<double> variances{std::exp(-7.0), std::exp(-5.0), std::exp(-3.0)};
    const auto curves = run_perturbation_study(p, variances, sweep_config(o, EnvelopeRegime::CorDeltaE0), o.seed);
    const char *names[] = {"var_e-7", "var_e-5", "var_e-3"};
    const char *titles[] = {"variance e^-7", "variance e^-5", "variance e^-3"};
    for (std::size_t i = 0; i < curves.size(); ++i) {
      SweepCurve c = curves[i];
      c.metadata.source = "deltas";
      panels.push_back(sweep_panel(c, out.curve(c, std::string("method1_") + names[i]),
                                   titles[i]));
    }
  } else if (o.family == "analytic") {
    both_methods(gen_analytic2x2(), regime_of(o, EnvelopeRegime::Thm1), "analytic");
  } else {
    fail(ErrorKind::InvalidInput, "unknown bench family '" + o.family + "'");
  }
  if (panels.empty()) fail(ErrorKind::InvalidInput, "--methods selected nothing");
  out.plot(panels);
  out.finish();
  return 0;
}

int dispatch(const std::vector<std::string> &args);

int cmd_rerun(const Options &o) {
  if (o.manifest.empty()) fail(ErrorKind::InvalidInput, "--manifest is required");
  const RunManifest m = read_manifest(o.manifest);
  if (!m.args.empty() && m.args.front() == "rerun") fail(ErrorKind::InvalidInput, "manifest refers to another rerun");
  std::vector<std::string> args = m.args;
  if (std::find(args.begin(), args.end(), "--seed") == args.end()) {
    args.push_back("--seed");
    args.push_back(std::to_string(m.seed));
  }
  return dispatch(args);
}

void add_grid_flags(CLI::App *c, Options &o) {
  c->add_option("--tau-min", o.tauMin, "Smallest tau")->capture_default_str();
  c->add_option("--tau-max", o.tauMax, "Largest tau")->capture_default_str();
  c->add_option("--points", o.points, "Number of log-spaced tau values")->capture_default_str();
  c->add_option("--delta", o.delta, "Perturbation level delta / band norm")->capture_default_str();
  c->add_option("--scale", o.scale, "Multiply E and A (and J, R) by this factor")->capture_default_str();
  c->add_option("--format", o.format, "csv, json or both")->capture_default_str();
  c->add_option("--out", o.out, "Output directory")->capture_default_str();
  c->add_option("--seed", o.seed, "Seed (default from PINDEX_SEED)")->capture_default_str();
  c->add_flag("--timestamp", o.timestamp, "Record a creation time in the manifest");
}

void add_method2_flags(CLI::App *c, Options &o) {
  c->add_option("--samples", o.samples, "Ginibre samples")->capture_default_str();
  c->add_option("--h", o.h, "Initial Cayley parameter")->capture_default_str();
  c->add_flag("--resample-per-tau", o.resample, "Fresh Ginibre matrix for every tau");
}

void add_method1_flags(CLI::App *c, Options &o) {
  c->add_option("--rank-tol", o.rankTol, "Rank tolerance for the kernel of E");
  c->add_option("--regime", o.regime, "auto, none, Thm1, CorDeltaE0, CorPH_QI, CorPH_Qweighted")->capture_default_str();
}

int dispatch(const std::vector<std::string> &args) {
  Options o;
  o.seed = default_seed(0);
  CLI::App app{"Index-two proximity of matrix pencils via eigenvalue growth under perturbation"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  auto *structure = app.add_subcommand("structure", "Block-form report for lambda E - A");
  structure->add_option("--E", o.E)->required();
  structure->add_option("--A", o.A)->required();
  structure->add_option("--rank-tol", o.rankTol);
  structure->add_option("--scale", o.scale);

  auto *sweep = app.add_subcommand("sweep", "Deterministic tau sweep (Method 1)");
  sweep->add_option("--E", o.E, "Matrix Market file")->required();
  sweep->add_option("--A", o.A, "Matrix Market file");
  sweep->add_option("--J", o.J, "pH form: skew part");
  sweep->add_option("--R", o.R, "pH form: dissipation (default 0)");
  sweep->add_option("--Q", o.Q, "pH form: energy matrix (default I)");
  add_grid_flags(sweep, o);
  add_method1_flags(sweep, o);

  auto *randomized = app.add_subcommand("randomized", "Randomized sweep of the normalized Cayley matrix (Method 2)");
  randomized->add_option("--E", o.E);
  randomized->add_option("--A", o.A);
  randomized->add_option("--M", o.M, "Use this (normalized) matrix directly");
  add_grid_flags(randomized, o);
  add_method2_flags(randomized, o);

  auto *classify = app.add_subcommand("classify", "Index verdict for a stored curve");
  classify->add_option("--in", o.in, "Curve JSON")->required();
  classify->add_option("--window", o.window)->capture_default_str();
  classify->add_option("--slope-tol", o.slopeTol)->capture_default_str();
  classify->add_option("--min-decades", o.minDecades)->capture_default_str();
  classify->add_flag("--verbose", o.verbose, "Print segments and notes on stderr");

  auto *bench = app.add_subcommand("bench", "Regenerate a benchmark row");
  bench->add_option("family", o.family, "toy, congruence, strings-a, strings-b, deltas, analytic")->required();
  bench->add_option("--n", o.n, "Half size of the toy model (100) or number of masses (10)");
  bench->add_option("--methods", o.methods, "Which methods to run: 1, 2 or 12")->capture_default_str();
  add_grid_flags(bench, o);
  add_method1_flags(bench, o);
  add_method2_flags(bench, o);

  auto *rerun = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  rerun->add_option("--manifest", o.manifest)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitInput;
  }

  if (structure->parsed()) return cmd_structure(o);
  if (sweep->parsed()) return cmd_sweep(o, args);
  if (randomized->parsed()) return cmd_randomized(o, args);
  if (classify->parsed()) return cmd_classify(o);
  if (bench->parsed()) return cmd_bench(o, args, bench->count("--delta") > 0);
  return cmd_rerun(o);
}

}  // namespace

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(args);
  } catch (const Error &e) {
    std::cerr << "pindex: " << e.what() << "\n";
    return e.is_input_error() ? kExitInput : kExitNumerical;
  } catch (const std::exception &e) {
    std::cerr << "pindex: " << e.what() << "\n";
    return kExitNumerical;
  }
}

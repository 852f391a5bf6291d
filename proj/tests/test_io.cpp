// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "pindex/bench.hpp"
#include "pindex/io.hpp"
#include "pindex/randomized.hpp"
#include "pindex/sweep.hpp"
#include "support.hpp"

using namespace pindex;
using testing::mat;
using testing::max_diff;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pindex_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string &name) const { return path / name; }
  static inline int counter = 0;
};

void put(const fs::path &p, const std::string &text) {
  std::ofstream(p) << text;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

int count_of(const std::string &s, const std::string &needle) {
  int n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

bool same_bits(const std::vector<double> &a, const std::vector<double> &b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

ErrorKind kind_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("read_matrix: array and coordinate formats") {
  TempDir d;
  put(d / "i.mtx", "%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n0\n0\n1\n");
  CHECK(read_matrix(d / "i.mtx") == ComplexDense::Identity(2, 2));

  put(d / "s.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2\n2 1 1\n");
  CHECK(max_diff(read_matrix(d / "s.mtx"), mat({{2, 1}, {1, 0}})) == 0.0);

  put(d / "h.mtx", "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 3 0\n2 1 1 2\n");
  CHECK(max_diff(read_matrix(d / "h.mtx"), mat({{3, Complex(1, -2)}, {Complex(1, 2), 0}})) == 0.0);

  put(d / "k.mtx", "%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 4\n");
  CHECK(max_diff(read_matrix(d / "k.mtx"), mat({{0, -4}, {4, 0}})) == 0.0);

  put(d / "p.mtx", "%%MatrixMarket matrix coordinate pattern general\n2 3 3\n1 3\n2 1\n2 1\n");
  CHECK(max_diff(read_matrix(d / "p.mtx"), mat({{0, 0, 1}, {2, 0, 0}})) == 0.0);

  put(d / "c.mtx", "%%MatrixMarket matrix array complex general\n1 2\n1.5 -2\n0 0.25\n");
  CHECK(max_diff(read_matrix(d / "c.mtx"), mat({{Complex(1.5, -2), Complex(0, 0.25)}})) == 0.0);
}

TEST_CASE("read_matrix: errors") {
  TempDir d;
  put(d / "bad.mtx", "%%MatrixMarket tensor array real general\n1 1\n1\n");
  try {
    read_matrix(d / "bad.mtx");
    FAIL("expected ParseError");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("bad.mtx:1:") != std::string::npos);
  }
  put(d / "trunc.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n");
  CHECK(kind_of([&] { read_matrix(d / "trunc.mtx"); }) == ErrorKind::ParseError);
  put(d / "range.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  CHECK(kind_of([&] { read_matrix(d / "range.mtx"); }) == ErrorKind::ParseError);
  put(d / "num.mtx", "%%MatrixMarket matrix array real general\n1 1\nabc\n");
  CHECK(kind_of([&] { read_matrix(d / "num.mtx"); }) == ErrorKind::ParseError);
  put(d / "big.mtx", "%%MatrixMarket matrix coordinate real general\n5 5 0\n");
  CHECK(kind_of([&] { read_matrix(d / "big.mtx", 4); }) == ErrorKind::DimensionLimit);
  CHECK(kind_of([&] { read_matrix(d / "missing.mtx"); }) == ErrorKind::IOError);
}

TEST_CASE("write_matrix roundtrips to full precision") {
  TempDir d;
  CounterRng rng(81, 0);
  const Pencil p = gen_toy(4, rng);
  write_matrix(d / "a.mtx", p.A);
  CHECK(read_matrix(d / "a.mtx") == p.A);
  ComplexDense z = p.A;
  z(0, 1) = Complex(1.0 / 3.0, -std::sqrt(2.0));
  write_matrix(d / "z.mtx", z);
  CHECK(read_matrix(d / "z.mtx") == z);
  CHECK(slurp(d / "a.mtx").find("real") != std::string::npos);
  CHECK(slurp(d / "z.mtx").find("complex") != std::string::npos);
}

TEST_CASE("write_curve: CSV layout and gaps") {
  TempDir d;
  CurveRecord r;
  r.tau = {1e-3, 1e-2};
  r.value = {0.5, kMissing};
  r.lower = {0.25, kMissing};
  r.upper = {kMissing, 2.0};
  write_curve(r, d / "c.csv", CurveFormat::CSV);
  const auto ls = lines(slurp(d / "c.csv"));
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "tau,value,lower,upper");
  CHECK(ls[1] == "0.001,0.5,0.25,");
  CHECK(ls[2] == "0.01,,,2");

  CurveRecord bare;
  bare.tau = {1.0, 2.0};
  bare.value = {3.0, 4.0};
  write_curve(bare, d / "b.csv", CurveFormat::CSV);
  CHECK(lines(slurp(d / "b.csv"))[1] == "1,3,,");

  write_curve(r, d / "c.json", CurveFormat::JSON);
  const std::string js = slurp(d / "c.json");
  CHECK(js.find("null") != std::string::npos);
  const CurveRecord back = read_curve_json(d / "c.json");
  CHECK(std::isnan(back.value[1]));
  CHECK(back.value[0] == 0.5);

  CHECK(kind_of([&] { write_curve(r, d / "no" / "such" / "dir.csv", CurveFormat::CSV); }) == ErrorKind::IOError);
}

TEST_CASE("write_curve: JSON roundtrip is bitwise") {
  TempDir d;
  SweepConfig cfg;
  cfg.tauGrid = log_grid(1e-10, 1e2, 25);
  CounterRng rng(82, 0);
  const SweepCurve c = run_sweep(gen_toy(5, rng), cfg);
  const CurveRecord r = to_record(c);
  write_curve(c, d / "m1.json", CurveFormat::JSON);
  const CurveRecord back = read_curve_json(d / "m1.json");
  CHECK(same_bits(back.tau, r.tau));
  CHECK(same_bits(back.value, r.value));
  CHECK(back.lower.size() == r.lower.size());
  for (std::size_t i = 0; i < r.lower.size(); ++i) {
    CHECK(std::isnan(back.lower[i]) == std::isnan(r.lower[i]));
    if (!std::isnan(r.lower[i])) CHECK(back.lower[i] == r.lower[i]);
  }
  CHECK(back.delta == r.delta);
  CHECK(back.tau0 == r.tau0);
  CHECK(back.metadata.regime == "Thm1");
  CHECK(back.metadata.method == "method1");
  CHECK_FALSE(back.metadata.h);

  const Pencil a = gen_analytic2x2();
  const SweepCurve inf = run_sweep(a, cfg);
  write_curve(inf, d / "inf.json", CurveFormat::JSON);
  CHECK(slurp(d / "inf.json").find("\"+inf\"") != std::string::npos);
  CHECK(read_curve_json(d / "inf.json").tau0 == kInf);

  GinibreConfig g;
  g.n = 2;
  g.samples = 3;
  g.seed = 5;
  g.tauGrid = log_grid(1e-4, 1e-1, 6);
  const RandomizedCurve rc = run_randomized_sweep(normalize_for_ginibre(cayley(a, 0.5)), g);
  write_curve(rc, d / "m2.json", CurveFormat::JSON);
  const CurveRecord rb = read_curve_json(d / "m2.json");
  CHECK(same_bits(rb.value, rc.meanMinAbs));
  CHECK(rb.perSample == rc.perSampleMinAbs);
  CHECK(rb.turningPoint == rc.turningPointTau);
  CHECK(rb.metadata.seed == 5);
}

TEST_CASE("markers_for") {
  CurveRecord r;
  r.delta = 1e-7;
  r.tau0 = 1e-2;
  r.metadata.method = "method1";
  r.metadata.regime = "Thm1";
  CurveMarkers m = markers_for(r);
  CHECK(m.delta == 1e-7);
  CHECK(m.tau0 == 1e-2);
  r.metadata.regime = "CorDeltaE0";
  CHECK_FALSE(markers_for(r).delta);
  r.tau0 = kInf;
  CHECK_FALSE(markers_for(r).tau0);
  r.metadata.method = "method2";
  r.turningPoint = 1e-5;
  m = markers_for(r);
  CHECK(m.turningPoint == 1e-5);
}

TEST_CASE("emit_plot_script") {
  TempDir d;
  emit_plot_script({PlotPanel{"a.csv", "bare"}}, d / "one.gp");
  const std::string one = slurp(d / "one.gp");
  CHECK(count_of(one, "\nplot ") == 1);
  CHECK(count_of(one, "\nset arrow") == 0);
  CHECK(one.find("set logscale xy") != std::string::npos);
  CHECK(one.find("multiplot") == std::string::npos);

  PlotPanel m1{"m1.csv", "method 1", true, 1e-7, 1e-2};
  emit_plot_script({m1}, d / "m1.gp");
  const std::string two = slurp(d / "m1.gp");
  CHECK(count_of(two, "\nset arrow") == 2);
  CHECK(count_of(two, "dt '-.'") == 2);
  CHECK(two.find("'purple'") != std::string::npos);
  CHECK(two.find("'red'") != std::string::npos);

  emit_plot_script({m1, m1, m1}, d / "three.gp");
  const std::string three = slurp(d / "three.gp");
  CHECK(three.find("set multiplot layout 1,3") != std::string::npos);
  CHECK(count_of(three, "\nplot ") == 3);

  CHECK(kind_of([&] { emit_plot_script({}, d / "none.gp"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("manifest roundtrip") {
  TempDir d;
  RunManifest m;
  m.command = "bench";
  m.args = {"bench", "toy", "--seed", "7"};
  m.inputs = {{"family", "toy"}};
  m.config = {{"points", "150"}};
  m.seed = 7;
  m.outputs = {"method1.csv", "manifest.json"};
  write_manifest(m, d / "manifest.json");
  const RunManifest back = read_manifest(d / "manifest.json");
  CHECK(back.command == m.command);
  CHECK(back.args == m.args);
  CHECK(back.inputs == m.inputs);
  CHECK(back.config == m.config);
  CHECK(back.seed == 7);
  CHECK(back.outputs == m.outputs);
  CHECK_FALSE(back.createdAt);
  CHECK(slurp(d / "manifest.json").find("createdAt") == std::string::npos);
}

TEST_CASE("write_file_atomic leaves no temporaries") {
  TempDir d;
  write_file_atomic(d / "x.txt", "hello\n");
  write_file_atomic(d / "x.txt", "again\n");
  CHECK(slurp(d / "x.txt") == "again\n");
  int files = 0;
  for ([[maybe_unused]] const auto &e : fs::directory_iterator(d.path)) ++files;
  CHECK(files == 1);
}

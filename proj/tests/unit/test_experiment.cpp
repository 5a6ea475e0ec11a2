#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "couplefv/errors.hpp"
#include "couplefv/experiment.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace couplefv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("couplefv_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string without_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (!line.starts_with("wall_time")) out += line + '\n';
  return out;
}

int config_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("preset reference yields a populated config") {
  const ExperimentConfig c = parse_config("# minimal\npreset = resonance-smooth\n");
  const ExperimentConfig p = preset("resonance-smooth");
  CHECK(c.preset == "resonance-smooth");
  CHECK(c.u_left == p.u_left);
  CHECK(c.u_right == p.u_right);
  CHECK(c.eta == p.eta);
  CHECK(c.cells == p.cells);
  CHECK(c.flux_left == "burgers");
  CHECK(c.flux_right == "burgers_shifted");
}

TEST_CASE("later keys override the preset wherever it appears") {
  const ExperimentConfig c = parse_config(
      "N = 64\nzeta = -0.5   # shift\npreset = resonance-shock\nflux_scheme = engquist-osher\n"
      "snapshots = 0.1, 0.2\ntransmission = linear(2)\ncolor = erf\n");
  CHECK(c.cells == 64);
  CHECK(c.zeta == -0.5);
  CHECK(c.u_right == -2.0);
  CHECK(c.flux_scheme == FluxScheme::engquist_osher);
  CHECK(c.snapshot_times == std::vector<double>{0.1, 0.2});
  CHECK(c.transmission_left == "linear(2)");
  CHECK(c.transmission_right == "linear(2)");
}

TEST_CASE("config validation errors carry line numbers") {
  CHECK(config_error_line("preset = well-balanced\ncfl_number = 0.6\n") == 2);
  CHECK(config_error_line("\n\neta = -1\n") == 3);
  CHECK(config_error_line("N = 3\n") == 1);
  CHECK(config_error_line("preset = well-balanced\nbogus = 1\n") == 2);
  CHECK(config_error_line("just text\n") == 1);
  CHECK(config_error_line("N = 10\nN = 12\n") == 2);
  CHECK(config_error_line("N = ten\n") == 1);
  CHECK(config_error_line("preset = nope\n") == 1);
  CHECK(config_error_line("color = heaviside\ntransmission_right = linear(2)\n") == 1);
  CHECK(config_error_line("flux_left = euler\n") == 1);
  CHECK(config_error_line("t_end = 0.4\nsnapshots = 0.5\n") == 2);
  CHECK(config_error_line("diagnostics = maybe\n") == 1);
  try {
    parse_config("cfl_number = 0.6\n");
    FAIL("expected a validation error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cfl_number") != std::string::npos);
  }
}

TEST_CASE("preset catalog") {
  CHECK(preset("resonance-smooth").u_left == -1.0);
  CHECK(preset("resonance-smooth").u_right == 1.5);
  CHECK(preset("resonance-smooth").eta == 5e-3);
  CHECK(preset("resonance-shock").u_left == 1.0);
  CHECK(preset("resonance-shock").u_right == -2.0);
  CHECK(preset("state-coupling").color == ColorKind::heaviside);
  CHECK(preset("decoupled-burgers").color == ColorKind::constant);
  CHECK(preset("decoupled-burgers").color_value == 0.0);
  const ExperimentConfig wb = preset("well-balanced");
  CHECK(wb.initial == InitialKind::constant);
  CHECK(wb.u_value == 0.3);
  for (const std::string& name : preset_names()) CHECK_NOTHROW(validate(preset(name)));
  CHECK_THROWS_AS(preset("unknown"), InputError);
}

TEST_CASE("snapshot file names") {
  CHECK(snapshot_filename(0.4) == "snap_t0.4.csv");
  CHECK(snapshot_filename(1.0) == "snap_t1.csv");
  CHECK(snapshot_filename(0.0) == "snap_t0.csv");
}

TEST_CASE("entropy levels span the w range") {
  const CouplingModel m({FluxFunction::burgers(), FluxFunction::burgers_shifted()},
                        {Transmission::identity_map(), Transmission::linear(2.0)}, {-1.0, 1.5});
  const auto k = entropy_levels(m, 21);
  REQUIRE(k.size() == 21);
  CHECK(k.front() == -1.0);
  CHECK(k.back() == 1.5);
  CHECK(std::is_sorted(k.begin(), k.end()));
}

TEST_CASE("plateau extraction") {
  const StaggeredGrid g(-1.0, 1.0, 100);
  std::vector<double> w(g.cells(), -0.4);
  w[0] = 5.0;
  const Plateau p = extract_plateau(g, w, 0.06, 0.2);
  CHECK(p.value == -0.4);
  CHECK(p.stddev == 0.0);
  CHECK(p.samples == 14);
  CHECK_THROWS_AS(extract_plateau(g, w, 2.0, 3.0), InputError);
}

TEST_CASE("well-balanced preset writes a passing summary") {
  ExperimentConfig c = preset("well-balanced");
  c.output_dir = scratch_dir("wb");
  const ExperimentResult r = run_experiment(c);
  CHECK(r.ok());
  REQUIRE(r.well_balanced_residual.has_value());
  CHECK(*r.well_balanced_residual <= 1e-10);
  const std::string summary = read_file(c.output_dir / "summary.txt");
  CHECK(summary.find("well_balanced_residual = 0") != std::string::npos);
  CHECK(summary.find("invariants = pass") != std::string::npos);
  CHECK(first_line(c.output_dir / "snap_t0.4.csv") == "x,u,w,v");
  CHECK(first_line(c.output_dir / "diagnostics.csv") ==
        "n,t,dt,u_min,u_max,max_principle_violation,tv_w,weak_bv_increment,weak_bv_cumulative,"
        "max_entropy_residual");
  fs::remove_all(c.output_dir);
}

TEST_CASE("decoupled-burgers matches the plain Godunov oracle") {
  ExperimentConfig c = preset("decoupled-burgers");
  c.cells = 200;
  const ExperimentResult r = simulate(c);
  CHECK(r.ok());
  const StaggeredGrid g(c.x_min, c.x_max, c.cells);
  std::vector<double> ref = cell_average_initial(g, RiemannData{c.u_left, c.u_right, 0.0});
  const double dt = c.cfl_number * g.dx() / 1.0;
  double t = 0.0;
  while (t < c.t_end) {
    const bool last = c.t_end - t <= dt;
    const double h = last ? c.t_end - t : dt;
    ref = oracle::burgers_godunov_step(ref, h, g.dx());
    t = last ? c.t_end : t + h;
  }
  double err = 0.0;
  for (int j = 0; j < g.cells(); ++j) err = std::max(err, std::abs(r.final_state.u[j] - ref[j]));
  CHECK(err <= 1e-12);
}

TEST_CASE("snapshots and t_end are written in order") {
  ExperimentConfig c = preset("decoupled-burgers");
  c.cells = 50;
  c.snapshot_times = {0.2, 0.0, 0.1};
  c.output_dir = scratch_dir("snaps");
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.snapshots.size() == 4);
  CHECK(r.snapshots[0].t == 0.0);
  CHECK(r.snapshots[3].t == 0.4);
  for (double t : {0.0, 0.1, 0.2, 0.4}) CHECK(fs::exists(c.output_dir / snapshot_filename(t)));
  fs::remove_all(c.output_dir);
}

TEST_CASE("resonance-shock with zero shift keeps the discontinuity standing") {
  ExperimentConfig c = preset("resonance-shock");
  c.diagnostics = false;
  const ExperimentResult r = simulate(c);
  REQUIRE(r.shock.has_value());
  CHECK(std::abs(r.shock->speed) <= 0.05);
}

TEST_CASE("identical configs give identical files") {
  ExperimentConfig c = preset("resonance-shock");
  c.cells = 100;
  c.zeta = 0.5;
  c.snapshot_times = {0.2};
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  c.output_dir = a;
  run_experiment(c);
  c.output_dir = b;
  run_experiment(c);
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    if (entry.path().filename() == "summary.txt")
      CHECK(without_wall_time(read_file(entry.path())) == without_wall_time(read_file(other)));
    else
      CHECK(read_file(entry.path()) == read_file(other));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("config files load from disk") {
  const fs::path dir = scratch_dir("cfg");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "run.cfg");
    out << "preset = well-balanced\nN = 40\n";
  }
  CHECK(load_config(dir / "run.cfg").cells == 40);
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("convergence study") {
  ExperimentConfig c = preset("decoupled-burgers");
  SUBCASE("reference in the list has zero error") {
    const auto t = convergence_study(c, {100, 400}, 400);
    CHECK(t.rows.back().l1_error == 0.0);
  }
  SUBCASE("errors decrease for the decoupled Riemann problem") {
    const auto t = convergence_study(c, {125, 250, 500, 1000}, 4000);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].l1_error < t.rows[i - 1].l1_error);
  }
  SUBCASE("smooth data before the shock forms converges at first order") {
    c.initial = InitialKind::cosine;
    c.u_value = 0.5;
    c.amplitude = 0.5;
    c.t_end = 0.3;
    const auto t = convergence_study(c, {100, 200, 400, 800}, 3200);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].order >= 0.8);
  }
  CHECK_THROWS_AS(convergence_study(c, {300}, 400), InputError);
}

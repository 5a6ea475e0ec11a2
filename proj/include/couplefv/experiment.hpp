/// @file experiment.hpp
/// @brief Experiment configuration, preset catalog, run orchestration and
///        convergence studies.
#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "couplefv/coupling_model.hpp"
#include "couplefv/diagnostics.hpp"
#include "couplefv/grid.hpp"
#include "couplefv/numerical_flux.hpp"
#include "couplefv/wb_scheme.hpp"

namespace couplefv {

enum class ColorKind { erf_profile, constant, heaviside };
enum class InitialKind { riemann, constant, cosine };

struct ExperimentConfig {
  std::string preset;

  std::string flux_left = "burgers";
  std::string flux_right = "burgers_shifted";
  std::string transmission_left = "identity";
  std::string transmission_right = "identity";

  ColorKind color = ColorKind::erf_profile;
  double eta = 5e-3;
  double zeta = 0.0;
  double color_value = 0.0;

  double x_min = -1.0;
  double x_max = 1.0;
  int cells = 1000;
  double cfl_number = 0.45;
  double t_end = 0.4;
  long max_steps = 10'000'000;

  /// riemann: w-states u_left | u_right at jump, mapped to u through the
  /// transmission of their side. constant: u = u_value. cosine: u = u_value +
  /// amplitude cos(pi x).
  InitialKind initial = InitialKind::riemann;
  double u_left = -1.0;
  double u_right = 1.5;
  double jump = 0.0;
  double u_value = 0.0;
  double amplitude = 0.0;

  FluxScheme flux_scheme = FluxScheme::godunov;

  std::vector<double> snapshot_times;  ///< t_end is always written
  std::filesystem::path output_dir = "out";

  bool diagnostics = true;
  bool entropy_check = true;
  int entropy_levels = 21;
  double weak_bv_half_width = 0.8;
  bool track_shock = false;
  double shock_level = std::numeric_limits<double>::quiet_NaN();  ///< NaN: (w_l + w_r) / 2
  int shock_snapshots = 40;
  bool plateau = false;
};

/// Flat `key = value` text, `#` starts a comment. A `preset` key is applied
/// first wherever it appears; the remaining keys override it. Throws
/// ConfigError carrying the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

/// Key reference with defaults, printed by the CLI help.
std::string config_reference();

std::vector<std::string> preset_names();
/// resonance-smooth, resonance-shock, state-coupling, decoupled-burgers, well-balanced.
ExperimentConfig preset(std::string_view name);

/// Objects derived from a config.
struct ExperimentSetup {
  StaggeredGrid grid;
  CouplingModel model;
  std::vector<double> v;
  std::vector<double> u0;
};

ExperimentSetup build_setup(const ExperimentConfig& config);

/// Cell means w_j = (C0(u_j, v_j) + C0(u_j, v_{j+1})) / 2.
std::vector<double> cell_w(const CouplingModel& model, std::span<const double> u,
                           std::span<const double> v);

/// Kruzhkov constants spanning the w-image of the working range.
std::vector<double> entropy_levels(const CouplingModel& model, int count);

struct Plateau {
  double value = 0.0;   ///< median
  double stddev = 0.0;
  int samples = 0;
};

/// Median and standard deviation of w over cells with lo <= |x| <= hi.
Plateau extract_plateau(const StaggeredGrid& grid, std::span<const double> w, double lo, double hi);

struct ExperimentResult {
  ExperimentConfig config;
  StaggeredGrid grid;
  std::vector<double> v;
  std::vector<double> u0;
  SchemeState final_state{};
  std::vector<double> w_final{};
  std::vector<Snapshot> snapshots{};  ///< written snapshot times, in order
  std::vector<std::vector<double>> snapshot_u{};
  std::vector<DiagnosticsRow> rows{};
  double worst_max_principle = 0.0;
  double worst_convex_combination = 0.0;
  double worst_subcell_max_principle = 0.0;
  double worst_entropy_residual = 0.0;
  double weak_bv_cumulative = 0.0;
  std::optional<double> well_balanced_residual{};
  std::optional<ShockTrack> shock{};
  std::optional<Plateau> plateau{};
  std::vector<std::string> failures{};
  double wall_time = 0.0;

  bool ok() const { return failures.empty(); }
};

/// Runs the scheme in memory.
ExperimentResult simulate(const ExperimentConfig& config);

/// Writes snap_t{time}.csv files, diagnostics.csv and summary.txt.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

/// simulate followed by write_artifacts into config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// "0.4" -> "snap_t0.4.csv", shortest round-trip decimal form of the time.
std::string snapshot_filename(double t);

struct ConvergenceRow {
  int cells = 0;
  double l1_error = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();  ///< against the previous row
};

struct ConvergenceTable {
  int reference_cells = 0;
  std::vector<ConvergenceRow> rows;
};

/// L1 errors in w at t_end against a run on @p reference_cells cells, which
/// must be an integer multiple of every entry of @p cell_counts. Diagnostics
/// are disabled for these runs.
ConvergenceTable convergence_study(ExperimentConfig config, const std::vector<int>& cell_counts,
                                   int reference_cells);

}  // namespace couplefv

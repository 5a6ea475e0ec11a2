/// @file couplefv.cpp
/// @brief Command-line driver: run a config file, run a preset, or run a
///        convergence study.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "couplefv/errors.hpp"
#include "couplefv/experiment.hpp"

namespace {

struct Overrides {
  std::optional<int> cells;
  std::optional<double> eta;
  std::optional<double> zeta;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<std::string> flux;
  std::optional<std::string> out;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--n", o.cells, "number of cells");
  cmd->add_option("--eta", o.eta, "erf thickness");
  cmd->add_option("--zeta", o.zeta, "erf shift");
  cmd->add_option("--cfl", o.cfl, "cfl number in (0, 0.5]");
  cmd->add_option("--tend", o.t_end, "final time");
  cmd->add_option("--flux", o.flux, "godunov | engquist-osher | rusanov");
  cmd->add_option("--out", o.out, "output directory");
}

couplefv::ExperimentConfig apply(couplefv::ExperimentConfig c, const Overrides& o) {
  if (o.cells) c.cells = *o.cells;
  if (o.eta) c.eta = *o.eta;
  if (o.zeta) c.zeta = *o.zeta;
  if (o.cfl) c.cfl_number = *o.cfl;
  if (o.t_end) c.t_end = *o.t_end;
  if (o.flux) c.flux_scheme = couplefv::parse_flux_scheme(*o.flux);
  if (o.out) c.output_dir = *o.out;
  couplefv::validate(c);
  return c;
}

int report(const couplefv::ExperimentResult& r) {
  std::cout << std::setprecision(10) << "steps " << r.final_state.n << ", t = " << r.final_state.t
            << ", wall " << r.wall_time << " s\n";
  if (r.well_balanced_residual) std::cout << "well-balanced residual " << *r.well_balanced_residual << '\n';
  if (r.shock) std::cout << "shock speed " << r.shock->speed << '\n';
  if (r.plateau) std::cout << "plateau w* " << r.plateau->value << " (stddev " << r.plateau->stddev << ")\n";
  for (const auto& f : r.failures) std::cerr << "invariant failure: " << f << '\n';
  std::cout << "output written to " << r.config.output_dir.string() << '\n';
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Well-balanced finite volume solver for two conservation laws coupled across a thick interface"};
  app.footer(couplefv::config_reference());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  run->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "output directory (overrides output_dir)");

  std::string preset_name;
  Overrides preset_overrides;
  auto* preset = app.add_subcommand("preset", "run a named preset");
  preset->add_option("name", preset_name, "preset name")
      ->required()
      ->check(CLI::IsMember(couplefv::preset_names()));
  add_overrides(preset, preset_overrides);

  std::string converge_preset;
  std::vector<int> n_list;
  int n_ref = 0;
  Overrides converge_overrides;
  auto* converge = app.add_subcommand("converge", "L1 errors against a fine reference run");
  converge->add_option("--preset", converge_preset, "preset name")
      ->required()
      ->check(CLI::IsMember(couplefv::preset_names()));
  converge->add_option("--n-list", n_list, "coarse cell counts")->required()->delimiter(',');
  converge->add_option("--n-ref", n_ref, "reference cell count")->required();
  add_overrides(converge, converge_overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      couplefv::ExperimentConfig config = couplefv::load_config(config_path);
      if (run_out) config.output_dir = *run_out;
      return report(couplefv::run_experiment(config));
    }
    if (*preset) {
      const auto config = apply(couplefv::preset(preset_name), preset_overrides);
      return report(couplefv::run_experiment(config));
    }
    if (*converge) {
      const auto config = apply(couplefv::preset(converge_preset), converge_overrides);
      const auto table = couplefv::convergence_study(config, n_list, n_ref);
      std::cout << "N,l1_error,order\n" << std::setprecision(17);
      for (const auto& row : table.rows) {
        std::cout << row.cells << ',' << row.l1_error << ',';
        if (!std::isnan(row.order)) std::cout << row.order;
        std::cout << '\n';
      }
      if (converge_overrides.out) {
        std::filesystem::create_directories(config.output_dir);
        std::ofstream file(config.output_dir / "convergence.csv");
        file << "N,l1_error,order\n" << std::setprecision(17);
        for (const auto& row : table.rows) {
          file << row.cells << ',' << row.l1_error << ',';
          if (!std::isnan(row.order)) file << row.order;
          file << '\n';
        }
      }
      return 0;
    }
  } catch (const couplefv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

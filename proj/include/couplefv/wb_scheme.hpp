/// @file wb_scheme.hpp
/// @brief Well-balanced finite volume stepper for the thick-interface model.
///
/// One step from u^n to u^{n+1}:
///   1. subcell reconstruction  w^n_{j-1/2,+} = C0(u_j, v_{j-1/2}),
///                              w^n_{j+1/2,-} = C0(u_j, v_{j+1/2});
///   2. evolution of the cell mean w^n_j with left/right fluxes
///      G_{j+1/2,-} = g_{j+1/2} - f(w^n_{j+1/2,-}, v_{j+1/2}),
///      G_{j-1/2,+} = g_{j-1/2} - f(w^n_{j-1/2,+}, v_{j-1/2});
///   3. recovery of u^{n+1}_j from (C0(u, v_{j-1/2}) + C0(u, v_{j+1/2})) / 2 = w^{n+1}_j.
/// A state that is constant in u is reproduced exactly for any color profile.
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "couplefv/coupling_model.hpp"
#include "couplefv/grid.hpp"
#include "couplefv/numerical_flux.hpp"

namespace couplefv {

struct SchemeState {
  std::vector<double> u;
  double t = 0.0;
  long n = 0;
};

/// Everything a step computed, indexed by interface i = 0..J (interface i is the
/// left edge of cell i) or by cell j = 0..J-1.
struct StepReport {
  double dt = 0.0;
  double dx = 0.0;
  std::vector<double> w_minus;       ///< w^n_{i,-}: left trace at interface i (from cell i-1)
  std::vector<double> w_plus;        ///< w^n_{i,+}: right trace at interface i (from cell i)
  std::vector<double> g;             ///< g^n_i
  std::vector<double> w_minus_next;  ///< w^{n+1,-}_{i,-}
  std::vector<double> w_plus_next;   ///< w^{n+1,-}_{i,+}
  std::vector<double> w_cell;        ///< w^n_j
  std::vector<double> w_cell_next;   ///< w^{n+1}_j

  int cells() const { return static_cast<int>(w_cell.size()); }
  /// w^{n+1,-}_{j-1/2,+}, the evolved left subcell state of cell j.
  double left_intermediate(int j) const { return w_plus_next[j]; }
  /// w^{n+1,-}_{j+1/2,-}, the evolved right subcell state of cell j.
  double right_intermediate(int j) const { return w_minus_next[j + 1]; }
};

struct SubcellStates {
  double left_plus;    ///< C0(u_j, v_left)
  double right_minus;  ///< C0(u_j, v_right)
  double mean;
};

SubcellStates reconstruct(double u, double v_left, double v_right, const CouplingModel& model);

/// Half-cell averages at time t^{n+1} of the local Riemann solution, ratio = 2 dt / dx:
/// w_- - ratio (g - f(w_-)),  w_+ - ratio (f(w_+) - g).
std::pair<double, double> subcell_update(double w_minus, double w_plus, double g, double f_minus,
                                         double f_plus, double ratio);

/// Unique u with (C0(u, v_left) + C0(u, v_right)) / 2 = w_bar. Throws BracketError
/// outside the image of [m - 1, M + 1].
double invert_cell_average(double w_bar, double v_left, double v_right, const CouplingModel& model);
double invert_cell_average(double w_bar, double v_left, double v_right, const CouplingModel& model,
                           double guess);

/// Largest |d_w f(C0(u, v), v)| over u in [m, M] and the given color values,
/// sampled on 401 points plus the flux critical points.
double max_characteristic_speed(const CouplingModel& model, std::span<const double> v);

/// dt = cfl_number * dx / max speed. Throws InputError for cfl_number outside
/// (0, 1/2] or a max speed below 1e-14.
double cfl_dt(const StaggeredGrid& grid, const CouplingModel& model, std::span<const double> v,
              double cfl_number);

class WellBalancedScheme {
 public:
  using Observer =
      std::function<void(const SchemeState& before, const SchemeState& after, const StepReport&)>;

  /// @p v holds the J + 1 averaged color values. The model must outlive the scheme.
  WellBalancedScheme(const StaggeredGrid& grid, const CouplingModel& model, std::vector<double> v,
                     FluxScheme flux_scheme = FluxScheme::godunov);

  const StaggeredGrid& grid() const { return grid_; }
  const CouplingModel& model() const { return *model_; }
  const std::vector<double>& v() const { return v_; }
  FluxScheme flux_scheme() const { return flux_scheme_; }
  /// Frozen flux w -> f(w, v_i) at interface i.
  const ScalarFlux& interface_flux(int i) const { return *fluxes_[i]; }

  double max_speed() const { return max_speed_; }
  double cfl_dt(double cfl_number) const;

  /// Advances @p state by dt in place and fills @p report.
  void step(SchemeState& state, double dt, StepReport& report) const;
  std::pair<SchemeState, StepReport> step(const SchemeState& state, double dt) const;

  /// Steps until state.t == t_end (last step shortened to land exactly).
  /// Throws if more than @p max_steps steps would be needed.
  SchemeState run(SchemeState state, double t_end, double cfl_number,
                  const Observer& observer = {}, long max_steps = 10'000'000) const;

 private:
  StaggeredGrid grid_;
  const CouplingModel* model_;
  std::vector<double> v_;
  FluxScheme flux_scheme_;
  std::vector<std::shared_ptr<const ScalarFlux>> fluxes_;
  double max_speed_;
};

}  // namespace couplefv

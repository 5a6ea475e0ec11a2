/// @file diagnostics.hpp
/// @brief Discrete quantities bounded by the convergence analysis, plus the
///        error norms and shock tracking used by the experiments.
#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "couplefv/coupling_model.hpp"
#include "couplefv/grid.hpp"
#include "couplefv/wb_scheme.hpp"

namespace couplefv {

/// Largest positive part of the violation of
///   min(u_{j-1}, u_j, u_{j+1}) <= u_next_j <= max(u_{j-1}, u_j, u_{j+1}).
/// @p u_prev either already carries one ghost per side (size J + 2) or has
/// size J, in which case Neumann ghosts are applied. Other sizes throw InputError.
double max_principle_violation(std::span<const double> u_prev, std::span<const double> u_next);

/// sum_j |w_{j+1} - w_j|.
double total_variation(std::span<const double> w);

/// Half-open range of cell indices [first, last).
struct CellWindow {
  int first = 0;
  int last = 0;
};

/// Cells whose centres satisfy |x_j| < half_width.
CellWindow centered_window(const StaggeredGrid& grid, double half_width);

/// sum_{j in window} |w^{n+1,-}_{j+1/2,-} - w^{n+1,-}_{j-1/2,+}|^2 dx for one step.
double weak_bv_increment(const StepReport& report, CellWindow window);

/// Signed residuals of the two subcell entropy inequalities at one interface
/// (<= 0 when the inequality holds).
struct EntropyResidual {
  double left = 0.0;
  double right = 0.0;
};

/// Residuals for U = |w - k| at every interface of a step, with the Kruzhkov
/// flux as F and the Crandall-Majda numerical entropy flux as G.
std::vector<EntropyResidual> entropy_residuals(const StepReport& report,
                                               const WellBalancedScheme& scheme, double k);
/// Same, building the frozen fluxes from @p model and the interface colors @p v.
std::vector<EntropyResidual> entropy_residuals(const StepReport& report, const CouplingModel& model,
                                               double k, std::span<const double> v,
                                               FluxScheme flux_scheme = FluxScheme::godunov);

/// max_j |u_j - u_star|.
double well_balanced_residual(std::span<const double> u, double u_star);

struct Snapshot {
  double t = 0.0;
  std::vector<double> w;
};

/// Region excluded from level-crossing searches (the color transition).
struct ExcludedZone {
  double lo = 0.0;
  double hi = 0.0;
  bool active = false;
};

struct ShockTrack {
  std::vector<double> times;
  std::vector<double> positions;
  double speed = 0.0;
};

/// Position of the unique crossing of @p level in each snapshot (linear
/// interpolation between cell centres) and the least-squares speed over the
/// second half of the snapshots. Crossings inside @p excluded are ignored
/// unless no crossing exists outside it (a discontinuity standing inside the
/// interface). Throws InputError on zero or multiple crossings.
ShockTrack shock_track(const StaggeredGrid& grid, std::span<const Snapshot> snapshots, double level,
                       ExcludedZone excluded = {});

/// Single-snapshot crossing location used by shock_track.
double level_crossing(const StaggeredGrid& grid, std::span<const double> w, double level,
                      ExcludedZone excluded = {});

/// L1 distance between piecewise-constant fields; the reference grid must
/// refine the coarse grid by an integer factor over the same domain.
double l1_error(const StaggeredGrid& coarse, std::span<const double> coarse_values,
                const StaggeredGrid& reference, std::span<const double> reference_values);

struct JensenCheck {
  bool lower_ok = false;
  bool upper_ok = false;
  double lower_slack = 0.0;  ///< (mean U - U(mean)) - lower bound
  double upper_slack = 0.0;  ///< upper bound - (mean U - U(mean))
};

/// Checks min U''/2 * Var <= mean U(w) - U(mean w) <= max U''/2 * Var for the
/// equal-weight discrete measure on @p values, with rounding tolerance.
JensenCheck jensen_bounds_check(std::span<const double> values, const EntropyPair& entropy);

/// One line of the diagnostics CSV.
struct DiagnosticsRow {
  long n = 0;
  double t = 0.0;
  double dt = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double max_principle_violation = 0.0;
  double tv_w = 0.0;
  double weak_bv_increment = 0.0;
  double weak_bv_cumulative = 0.0;
  double max_entropy_residual = 0.0;
};

/// Invariant tolerances enforced while recording.
struct InvariantTolerances {
  double max_principle = 1e-12;
  double convex_combination = 1e-13;
  double subcell_max_principle = 1e-12;
  double entropy = 1e-12;
};

/// Per-run accumulator driven as a WellBalancedScheme observer.
class DiagnosticsRecorder {
 public:
  /// @p entropy_levels are the Kruzhkov constants k checked each step (empty disables).
  DiagnosticsRecorder(const WellBalancedScheme& scheme, CellWindow weak_bv_window,
                      std::vector<double> entropy_levels, InvariantTolerances tolerances = {});

  void observe(const SchemeState& before, const SchemeState& after, const StepReport& report);

  const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  double weak_bv_cumulative() const { return weak_bv_cumulative_; }
  double worst_max_principle() const { return worst_max_principle_; }
  double worst_convex_combination() const { return worst_convex_combination_; }
  double worst_subcell_max_principle() const { return worst_subcell_; }
  double worst_entropy_residual() const { return worst_entropy_; }
  /// Human-readable description of every invariant that was violated.
  const std::vector<std::string>& failures() const { return failures_; }
  bool ok() const { return failures_.empty(); }

 private:
  const WellBalancedScheme* scheme_;
  CellWindow window_;
  std::vector<double> entropy_levels_;
  InvariantTolerances tol_;
  std::vector<DiagnosticsRow> rows_;
  double weak_bv_cumulative_ = 0.0;
  double worst_max_principle_ = 0.0;
  double worst_convex_combination_ = 0.0;
  double worst_subcell_ = 0.0;
  double worst_entropy_ = -std::numeric_limits<double>::infinity();
  std::vector<std::string> failures_;
};

/// Largest |w^{n+1}_j - (left + right intermediate) / 2| over the cells of a step.
double convex_combination_defect(const StepReport& report);
/// Largest excursion of the evolved subcell states outside [min, max] of their
/// interface pair.
double subcell_max_principle_violation(const StepReport& report);

}  // namespace couplefv

#include "couplefv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "couplefv/errors.hpp"

namespace couplefv {

double max_principle_violation(std::span<const double> u_prev, std::span<const double> u_next) {
  std::vector<double> extended;
  if (u_prev.size() == u_next.size()) {
    extended = apply_neumann_ghosts(u_prev);
    u_prev = extended;
  }
  if (u_prev.size() != u_next.size() + 2)
    throw InputError("max_principle_violation: u_prev must have size J or J + 2");
  double worst = 0.0;
  for (std::size_t j = 0; j < u_next.size(); ++j) {
    const double lo = std::min({u_prev[j], u_prev[j + 1], u_prev[j + 2]});
    const double hi = std::max({u_prev[j], u_prev[j + 1], u_prev[j + 2]});
    worst = std::max({worst, lo - u_next[j], u_next[j] - hi});
  }
  return worst;
}

double total_variation(std::span<const double> w) {
  double tv = 0.0;
  for (std::size_t j = 1; j < w.size(); ++j) tv += std::abs(w[j] - w[j - 1]);
  return tv;
}

CellWindow centered_window(const StaggeredGrid& grid, double half_width) {
  CellWindow window{grid.cells(), grid.cells()};
  for (int j = 0; j < grid.cells(); ++j) {
    if (std::abs(grid.center(j)) < half_width) {
      window.first = std::min(window.first, j);
      window.last = j + 1;
    }
  }
  if (window.first >= window.last) window = {0, 0};
  return window;
}

double weak_bv_increment(const StepReport& report, CellWindow window) {
  const int first = std::max(window.first, 0);
  const int last = std::min(window.last, report.cells());
  double sum = 0.0;
  for (int j = first; j < last; ++j) {
    const double jump = report.right_intermediate(j) - report.left_intermediate(j);
    sum += jump * jump;
  }
  return sum * report.dx;
}

namespace {

std::vector<EntropyResidual> residuals_with(const StepReport& report, double level, FluxScheme scheme,
                                            const auto& flux_at) {
  const double ratio = 2.0 * report.dt / report.dx;
  const std::size_t faces = report.g.size();
  std::vector<EntropyResidual> out(faces);
  for (std::size_t i = 0; i < faces; ++i) {
    const ScalarFlux& flux = flux_at(i);
    const double a = report.w_minus[i];
    const double b = report.w_plus[i];
    // A level beyond every state at this interface gives the same residuals as
    // the nearest state, and the frozen flux may not be defined out there.
    const double k = std::clamp(level, std::min({a, b, report.w_minus_next[i], report.w_plus_next[i]}),
                                std::max({a, b, report.w_minus_next[i], report.w_plus_next[i]}));
    const double entropy_flux = numerical_entropy_flux_kruzhkov(a, b, k, flux, scheme);
    const double left_flux = kruzhkov_flux(a, k, flux);
    const double right_flux = (a == b) ? left_flux : kruzhkov_flux(b, k, flux);
    out[i].left = std::abs(report.w_minus_next[i] - k) - std::abs(a - k) +
                  ratio * (entropy_flux - left_flux);
    out[i].right = std::abs(report.w_plus_next[i] - k) - std::abs(b - k) +
                   ratio * (right_flux - entropy_flux);
  }
  return out;
}

}  // namespace

std::vector<EntropyResidual> entropy_residuals(const StepReport& report,
                                               const WellBalancedScheme& scheme, double k) {
  return residuals_with(report, k, scheme.flux_scheme(),
                        [&](std::size_t i) -> const ScalarFlux& { return scheme.interface_flux(static_cast<int>(i)); });
}

std::vector<EntropyResidual> entropy_residuals(const StepReport& report, const CouplingModel& model,
                                               double k, std::span<const double> v,
                                               FluxScheme flux_scheme) {
  if (v.size() != report.g.size()) throw InputError("entropy_residuals: one color per interface required");
  std::vector<ScalarFlux> fluxes;
  fluxes.reserve(v.size());
  for (double c : v) fluxes.push_back(frozen_flux(model, c));
  return residuals_with(report, k, flux_scheme,
                        [&](std::size_t i) -> const ScalarFlux& { return fluxes[i]; });
}

double well_balanced_residual(std::span<const double> u, double u_star) {
  double worst = 0.0;
  for (double x : u) worst = std::max(worst, std::abs(x - u_star));
  return worst;
}

double level_crossing(const StaggeredGrid& grid, std::span<const double> w, double level,
                      ExcludedZone excluded) {
  std::vector<double> outside, inside;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    const bool above_l = w[j] >= level;
    const bool above_r = w[j + 1] >= level;
    if (above_l == above_r) continue;
    const double x = grid.center(static_cast<int>(j)) +
                     (level - w[j]) / (w[j + 1] - w[j]) * grid.dx();
    if (excluded.active && x >= excluded.lo && x <= excluded.hi)
      inside.push_back(x);
    else
      outside.push_back(x);
  }
  if (outside.size() == 1) return outside.front();
  if (outside.empty() && inside.size() == 1) return inside.front();
  std::ostringstream os;
  os << "expected a single crossing of level " << level << ", found " << outside.size()
     << " outside and " << inside.size() << " inside the excluded zone";
  throw InputError(os.str());
}

ShockTrack shock_track(const StaggeredGrid& grid, std::span<const Snapshot> snapshots, double level,
                       ExcludedZone excluded) {
  if (snapshots.size() < 2) throw InputError("shock tracking needs at least two snapshots");
  ShockTrack track;
  for (const Snapshot& s : snapshots) {
    track.times.push_back(s.t);
    track.positions.push_back(level_crossing(grid, s.w, level, excluded));
  }
  const std::size_t begin = snapshots.size() / 2;
  const std::size_t count = snapshots.size() - begin;
  if (count < 2) throw InputError("shock tracking needs two snapshots in the fitting half");
  double mt = 0.0, mx = 0.0;
  for (std::size_t i = begin; i < snapshots.size(); ++i) {
    mt += track.times[i];
    mx += track.positions[i];
  }
  mt /= count;
  mx /= count;
  double num = 0.0, den = 0.0;
  for (std::size_t i = begin; i < snapshots.size(); ++i) {
    num += (track.times[i] - mt) * (track.positions[i] - mx);
    den += (track.times[i] - mt) * (track.times[i] - mt);
  }
  if (!(den > 0.0)) throw InputError("shock tracking needs distinct snapshot times");
  track.speed = num / den;
  return track;
}

double l1_error(const StaggeredGrid& coarse, std::span<const double> coarse_values,
                const StaggeredGrid& reference, std::span<const double> reference_values) {
  if (static_cast<int>(coarse_values.size()) != coarse.cells() ||
      static_cast<int>(reference_values.size()) != reference.cells())
    throw InputError("l1_error: value arrays must match their grids");
  const double tol = 1e-12 * (coarse.x_max() - coarse.x_min());
  if (std::abs(coarse.x_min() - reference.x_min()) > tol ||
      std::abs(coarse.x_max() - reference.x_max()) > tol)
    throw InputError("l1_error: grids cover different domains");
  if (reference.cells() % coarse.cells() != 0)
    throw InputError("l1_error: reference grid must refine the coarse grid integrally");
  const int factor = reference.cells() / coarse.cells();
  double sum = 0.0;
  for (int j = 0; j < coarse.cells(); ++j)
    for (int k = j * factor; k < (j + 1) * factor; ++k) sum += std::abs(coarse_values[j] - reference_values[k]);
  return sum * reference.dx();
}

JensenCheck jensen_bounds_check(std::span<const double> values, const EntropyPair& entropy) {
  if (values.empty()) throw InputError("jensen_bounds_check needs at least one value");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0, mean_u = 0.0;
  for (double x : values) {
    var += (x - mean) * (x - mean);
    mean_u += entropy.U(x);
  }
  var /= n;
  mean_u /= n;
  const double gap = mean_u - entropy.U(mean);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const auto [h_min, h_max] = entropy.hessian_bounds(*lo, *hi);
  const double lower = (var == 0.0) ? 0.0 : 0.5 * h_min * var;
  const double upper = (var == 0.0) ? 0.0 : 0.5 * h_max * var;
  const double tol = 1e-12 * std::max({1.0, std::abs(mean_u), std::abs(entropy.U(mean))});
  JensenCheck check;
  check.lower_slack = gap - lower;
  check.upper_slack = upper - gap;
  check.lower_ok = check.lower_slack >= -tol;
  check.upper_ok = check.upper_slack >= -tol;
  return check;
}

double convex_combination_defect(const StepReport& report) {
  double worst = 0.0;
  for (int j = 0; j < report.cells(); ++j) {
    const double combo = 0.5 * (report.left_intermediate(j) + report.right_intermediate(j));
    worst = std::max(worst, std::abs(report.w_cell_next[j] - combo));
  }
  return worst;
}

double subcell_max_principle_violation(const StepReport& report) {
  double worst = 0.0;
  for (std::size_t i = 0; i < report.g.size(); ++i) {
    const double lo = std::min(report.w_minus[i], report.w_plus[i]);
    const double hi = std::max(report.w_minus[i], report.w_plus[i]);
    for (double x : {report.w_minus_next[i], report.w_plus_next[i]})
      worst = std::max({worst, lo - x, x - hi});
  }
  return worst;
}

DiagnosticsRecorder::DiagnosticsRecorder(const WellBalancedScheme& scheme, CellWindow weak_bv_window,
                                         std::vector<double> entropy_levels,
                                         InvariantTolerances tolerances)
    : scheme_(&scheme), window_(weak_bv_window), entropy_levels_(std::move(entropy_levels)),
      tol_(tolerances) {}

void DiagnosticsRecorder::observe(const SchemeState& before, const SchemeState& after,
                                  const StepReport& report) {
  DiagnosticsRow row;
  row.n = after.n;
  row.t = after.t;
  row.dt = report.dt;
  const auto [mn, mx] = std::minmax_element(after.u.begin(), after.u.end());
  row.u_min = *mn;
  row.u_max = *mx;
  row.max_principle_violation = max_principle_violation(before.u, after.u);
  row.tv_w = total_variation(report.w_cell_next);
  row.weak_bv_increment = weak_bv_increment(report, window_);
  weak_bv_cumulative_ += row.weak_bv_increment;
  row.weak_bv_cumulative = weak_bv_cumulative_;

  double entropy = entropy_levels_.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (double k : entropy_levels_)
    for (const EntropyResidual& r : entropy_residuals(report, *scheme_, k))
      entropy = std::max({entropy, r.left, r.right});
  row.max_entropy_residual = entropy;

  const double combo = convex_combination_defect(report);
  const double subcell = subcell_max_principle_violation(report);
  worst_max_principle_ = std::max(worst_max_principle_, row.max_principle_violation);
  worst_convex_combination_ = std::max(worst_convex_combination_, combo);
  worst_subcell_ = std::max(worst_subcell_, subcell);
  if (!entropy_levels_.empty()) worst_entropy_ = std::max(worst_entropy_, entropy);

  auto fail = [&](const char* what, double value, double limit) {
    std::ostringstream os;
    os.precision(6);
    os << "step " << after.n << ": " << what << " " << value << " exceeds " << limit;
    failures_.push_back(os.str());
  };
  if (row.max_principle_violation > tol_.max_principle)
    fail("local max principle violation", row.max_principle_violation, tol_.max_principle);
  if (combo > tol_.convex_combination) fail("convex-combination defect", combo, tol_.convex_combination);
  if (subcell > tol_.subcell_max_principle)
    fail("subcell max principle violation", subcell, tol_.subcell_max_principle);
  if (!entropy_levels_.empty() && entropy > tol_.entropy) fail("entropy residual", entropy, tol_.entropy);
  rows_.push_back(row);
}

}  // namespace couplefv

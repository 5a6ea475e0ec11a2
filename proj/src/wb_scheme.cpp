#include "couplefv/wb_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "couplefv/errors.hpp"
#include "couplefv/numerics.hpp"

namespace couplefv {

SubcellStates reconstruct(double u, double v_left, double v_right, const CouplingModel& model) {
  const double left = model.c0(u, v_left);
  const double right = model.c0(u, v_right);
  return {left, right, 0.5 * (left + right)};
}

std::pair<double, double> subcell_update(double w_minus, double w_plus, double g, double f_minus,
                                         double f_plus, double ratio) {
  return {w_minus - ratio * (g - f_minus), w_plus - ratio * (f_plus - g)};
}

double invert_cell_average(double w_bar, double v_left, double v_right, const CouplingModel& model) {
  return invert_cell_average(w_bar, v_left, v_right, model, w_bar);
}

double invert_cell_average(double w_bar, double v_left, double v_right, const CouplingModel& model,
                           double guess) {
  if (model.identity_transmission()) return w_bar;
  if (v_left == v_right) return model.u_of_w(w_bar, v_left, guess);
  const auto [lo, hi] = model.inversion_bracket();
  // Same expression as reconstruct(): an unchanged mean inverts to the same u bit for bit.
  return numerics::solve_increasing(
      [&](double u) { return 0.5 * (model.c0(u, v_left) + model.c0(u, v_right)); },
      [&](double u) { return 0.5 * (model.dc0_du(u, v_left) + model.dc0_du(u, v_right)); }, w_bar,
      guess, lo, hi);
}

double max_characteristic_speed(const CouplingModel& model, std::span<const double> v) {
  std::vector<double> colors(v.begin(), v.end());
  std::sort(colors.begin(), colors.end());
  colors.erase(std::unique(colors.begin(), colors.end()), colors.end());

  const WorkingRange& range = model.range();
  constexpr int samples = 401;
  std::vector<double> nodes;
  for (int i = 0; i < samples; ++i) nodes.push_back(std::lerp(range.lo, range.hi, static_cast<double>(i) / (samples - 1)));
  for (double c : model.fluxes().minus.critical_points) nodes.push_back(model.transmission().minus.theta(c));
  for (double c : model.fluxes().plus.critical_points) nodes.push_back(model.transmission().plus.theta(c));
  std::erase_if(nodes, [&](double x) { return x < range.lo || x > range.hi; });

  double speed = 0.0;
  for (double c : colors)
    for (double u : nodes) speed = std::max(speed, std::abs(model.eigenvalue(u, c)));
  return speed;
}

double cfl_dt(const StaggeredGrid& grid, const CouplingModel& model, std::span<const double> v,
              double cfl_number) {
  if (!(cfl_number > 0.0 && cfl_number <= 0.5))
    throw InputError("cfl_number must lie in (0, 1/2]");
  const double speed = max_characteristic_speed(model, v);
  if (speed < 1e-14) throw InputError("degenerate characteristic speed: time step is unbounded");
  return cfl_number * grid.dx() / speed;
}

WellBalancedScheme::WellBalancedScheme(const StaggeredGrid& grid, const CouplingModel& model,
                                       std::vector<double> v, FluxScheme flux_scheme)
    : grid_(grid), model_(&model), v_(std::move(v)), flux_scheme_(flux_scheme) {
  if (static_cast<int>(v_.size()) != grid_.interfaces())
    throw InputError("color array must have one entry per interface (J + 1)");
  for (double c : v_)
    if (!(c >= 0.0 && c <= 1.0)) throw InputError("color values must lie in [0, 1]");

  // The color never changes, so each distinct value needs its frozen flux once.
  std::map<double, std::shared_ptr<const ScalarFlux>> cache;
  fluxes_.reserve(v_.size());
  for (double c : v_) {
    auto& slot = cache[c];
    if (!slot) slot = std::make_shared<const ScalarFlux>(frozen_flux(model, c));
    fluxes_.push_back(slot);
  }
  max_speed_ = max_characteristic_speed(model, v_);
}

double WellBalancedScheme::cfl_dt(double cfl_number) const {
  if (!(cfl_number > 0.0 && cfl_number <= 0.5))
    throw InputError("cfl_number must lie in (0, 1/2]");
  if (max_speed_ < 1e-14) throw InputError("degenerate characteristic speed: time step is unbounded");
  return cfl_number * grid_.dx() / max_speed_;
}

void WellBalancedScheme::step(SchemeState& state, double dt, StepReport& report) const {
  const int cells = grid_.cells();
  if (static_cast<int>(state.u.size()) != cells) throw InputError("state size does not match grid");
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  const CouplingModel& model = *model_;
  const double dx = grid_.dx();
  const double ratio = 2.0 * dt / dx;
  const int faces = cells + 1;

  report.dt = dt;
  report.dx = dx;
  report.w_minus.resize(faces);
  report.w_plus.resize(faces);
  report.g.resize(faces);
  report.w_minus_next.resize(faces);
  report.w_plus_next.resize(faces);
  report.w_cell.resize(cells);
  report.w_cell_next.resize(cells);
  std::vector<double> f_minus(faces), f_plus(faces);

  const std::vector<double>& u = state.u;
  for (int i = 0; i < faces; ++i) {
    // Neumann ghosts: the cells beyond the edges repeat the edge values.
    const double u_left = u[std::max(i - 1, 0)];
    const double u_right = u[std::min(i, cells - 1)];
    const ScalarFlux& flux = *fluxes_[i];
    const double a = model.c0(u_left, v_[i]);
    const double b = model.c0(u_right, v_[i]);
    report.w_minus[i] = a;
    report.w_plus[i] = b;
    report.g[i] = numerical_flux(flux_scheme_, a, b, flux);
    f_minus[i] = flux(a);
    f_plus[i] = (a == b) ? f_minus[i] : flux(b);
    std::tie(report.w_minus_next[i], report.w_plus_next[i]) =
        subcell_update(a, b, report.g[i], f_minus[i], f_plus[i], ratio);
  }

  const double lambda = dt / dx;
  for (int j = 0; j < cells; ++j) {
    const double mean = 0.5 * (report.w_plus[j] + report.w_minus[j + 1]);
    const double flux_right = report.g[j + 1] - f_minus[j + 1];  // G_{j+1/2,-}
    const double flux_left = report.g[j] - f_plus[j];            // G_{j-1/2,+}
    const double next = mean - lambda * (flux_right - flux_left);
    report.w_cell[j] = mean;
    report.w_cell_next[j] = next;
  }

  std::vector<double> u_next(cells);
  for (int j = 0; j < cells; ++j) {
    try {
      u_next[j] = invert_cell_average(report.w_cell_next[j], v_[j], v_[j + 1], model, u[j]);
    } catch (const BracketError& e) {
      std::ostringstream os;
      os << "cell average inversion failed at cell " << j << ", step " << state.n << ": " << e.what();
      throw BracketError(os.str());
    }
  }
  state.u = std::move(u_next);
  state.t += dt;
  ++state.n;
}

std::pair<SchemeState, StepReport> WellBalancedScheme::step(const SchemeState& state, double dt) const {
  std::pair<SchemeState, StepReport> out{state, {}};
  step(out.first, dt, out.second);
  return out;
}

SchemeState WellBalancedScheme::run(SchemeState state, double t_end, double cfl_number,
                                    const Observer& observer, long max_steps) const {
  if (t_end < state.t) throw InputError("t_end precedes the current time");
  if (t_end == state.t) return state;
  const double dt_cfl = cfl_dt(cfl_number);
  StepReport report;
  SchemeState before;
  long taken = 0;
  while (state.t < t_end) {
    if (++taken > max_steps) throw InputError("step-count cap exceeded");
    const double remaining = t_end - state.t;
    const bool last = remaining <= dt_cfl;
    const double dt = last ? remaining : dt_cfl;
    if (observer) before = state;
    step(state, dt, report);
    if (last) state.t = t_end;
    if (observer) observer(before, state, report);
  }
  return state;
}

}  // namespace couplefv

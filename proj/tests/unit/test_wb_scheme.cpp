#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "couplefv/diagnostics.hpp"
#include "couplefv/errors.hpp"
#include "couplefv/wb_scheme.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace couplefv;

namespace {

CouplingModel make_model(const std::string& left_flux, const std::string& right_flux, Transmission plus,
                         double lo, double hi) {
  return CouplingModel({FluxFunction::from_name(left_flux), FluxFunction::from_name(right_flux)},
                       {Transmission::identity_map(), std::move(plus)}, {lo, hi});
}

std::vector<double> random_colors(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("reconstruct examples") {
  const auto scaled = make_model("burgers", "burgers_shifted", Transmission::linear(2.0), -1.0, 1.5);
  const auto s = reconstruct(0.8, 0.4, 0.4, scaled);
  CHECK(s.left_plus == s.right_minus);
  CHECK(s.mean == s.left_plus);
  CHECK(s.left_plus == scaled.c0(0.8, 0.4));
  const auto identity = make_model("burgers", "burgers_shifted", Transmission::identity_map(), -1.0, 1.5);
  const auto t = reconstruct(0.37, 0.1, 0.9, identity);
  CHECK(t.left_plus == 0.37);
  CHECK(t.right_minus == 0.37);
  CHECK(t.mean == 0.37);
  const auto r = reconstruct(1.0, 0.0, 1.0, scaled);
  CHECK(r.left_plus == 1.0);
  CHECK(r.right_minus == 0.5);
  CHECK(r.mean == 0.75);
}

TEST_CASE("cfl_dt examples") {
  const auto m = make_model("burgers", "burgers_shifted", Transmission::identity_map(), -1.0, 1.5);
  const StaggeredGrid g(-1.0, 1.0, 100);
  const std::vector<double> ones(101, 1.0), zeros(101, 0.0);
  CHECK(cfl_dt(g, m, ones, 0.5) == doctest::Approx(0.2 * g.dx()).epsilon(1e-15));
  CHECK(cfl_dt(g, m, zeros, 0.5) == doctest::Approx(g.dx() / 3.0).epsilon(1e-15));
  CHECK(cfl_dt(g, m, zeros, 0.25) == doctest::Approx(0.5 * cfl_dt(g, m, zeros, 0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(cfl_dt(g, m, zeros, 0.6), InputError);
  CHECK_THROWS_AS(cfl_dt(g, m, zeros, 0.0), InputError);
  const auto flat = make_model("burgers", "burgers", Transmission::identity_map(), 0.0, 0.0);
  CHECK_THROWS_AS(cfl_dt(g, flat, zeros, 0.5), InputError);
}

TEST_CASE("subcell_update examples") {
  const ScalarFlux f([](double w) { return 0.5 * w * w; }, [](double w) { return w; }, {0.0});
  for (double c : {-0.7, 0.0, 1.2}) {
    const auto [m, p] = subcell_update(c, c, godunov(c, c, f), f(c), f(c), 0.4);
    CHECK(m == c);
    CHECK(p == c);
  }
  const auto [m1, p1] = subcell_update(1.0, -1.0, godunov(1.0, -1.0, f), f(1.0), f(-1.0), 0.4);
  CHECK(m1 == 1.0);
  CHECK(p1 == -1.0);
  const auto [m2, p2] = subcell_update(2.0, 0.0, godunov(2.0, 0.0, f), f(2.0), f(0.0), 0.4);
  CHECK(m2 == 2.0);
  CHECK(p2 == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("invert_cell_average examples") {
  const auto scaled = make_model("burgers", "burgers_shifted", Transmission::linear(2.0), -1.0, 1.5);
  CHECK(invert_cell_average(0.3, 0.6, 0.6, scaled) == scaled.u_of_w(0.3, 0.6));
  const auto identity = make_model("burgers", "burgers_shifted", Transmission::identity_map(), -1.0, 1.5);
  CHECK(invert_cell_average(0.123, 0.2, 0.9, identity) == 0.123);
  CHECK(std::abs(invert_cell_average(0.75, 0.0, 1.0, scaled) - 1.0) <= 1e-12);
}

TEST_CASE("constant states are preserved for arbitrary colors") {
  std::mt19937_64 rng(41);
  const StaggeredGrid g(-1.0, 1.0, 200);
  for (const Transmission& plus : {Transmission::identity_map(), Transmission::linear(2.0)}) {
    for (double u_star : {-0.6, 0.3, 1.1}) {
      const auto m = make_model("burgers", "burgers_shifted", plus, u_star, u_star);
      const WellBalancedScheme scheme(g, m, random_colors(rng, g.interfaces()));
      SchemeState state{std::vector<double>(g.cells(), u_star), 0.0, 0};
      StepReport report;
      const double dt = scheme.cfl_dt(0.45);
      for (int n = 0; n < 50; ++n) {
        scheme.step(state, dt, report);
        CHECK(well_balanced_residual(state.u, u_star) <= 1e-13);
      }
    }
  }
}

TEST_CASE("well-balanced run to t = 0.5") {
  const StaggeredGrid g(-1.0, 1.0, 200);
  const auto m = make_model("burgers", "burgers_shifted", Transmission::linear(2.0), 0.3, 0.3);
  const WellBalancedScheme scheme(g, m, cell_average_color(g, ColorFunction::erf_profile(0.01)));
  const SchemeState out = scheme.run({std::vector<double>(g.cells(), 0.3), 0.0, 0}, 0.5, 0.45);
  CHECK(out.t == 0.5);
  CHECK(well_balanced_residual(out.u, 0.3) <= 1e-10);
}

TEST_CASE("v = 0 reduces to the plain Godunov scheme for Burgers") {
  const StaggeredGrid g(-1.0, 1.0, 200);
  for (auto [ul, ur] : {std::pair{1.0, -0.5}, std::pair{-1.0, 1.0}, std::pair{0.5, 1.5}, std::pair{1.2, -1.0}}) {
    const auto m = make_model("burgers", "burgers", Transmission::identity_map(), std::min(ul, ur), std::max(ul, ur));
    const WellBalancedScheme scheme(g, m, std::vector<double>(g.interfaces(), 0.0));
    const double dt = 0.45 * g.dx() / std::max(std::abs(ul), std::abs(ur));
    CHECK(scheme.cfl_dt(0.45) == dt);
    SchemeState state{cell_average_initial(g, RiemannData{ul, ur, 0.0}), 0.0, 0};
    std::vector<double> ref = state.u;
    StepReport report;
    double worst = 0.0;
    while (state.t < 0.4) {
      const double h = std::min(dt, 0.4 - state.t);
      scheme.step(state, h, report);
      ref = oracle::burgers_godunov_step(ref, h, g.dx());
      double step_err = 0.0;
      for (int j = 0; j < g.cells(); ++j) step_err = std::max(step_err, std::abs(state.u[j] - ref[j]));
      CHECK(step_err <= 1e-14);
      worst = std::max(worst, step_err);
      if (0.4 - state.t < 1e-15) break;
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("run with v = 0 matches the reference Godunov run at t_end") {
  const StaggeredGrid g(-1.0, 1.0, 400);
  const auto m = make_model("burgers", "burgers", Transmission::identity_map(), -0.5, 1.0);
  const WellBalancedScheme scheme(g, m, std::vector<double>(g.interfaces(), 0.0));
  const SchemeState out = scheme.run({cell_average_initial(g, RiemannData{1.0, -0.5, 0.0}), 0.0, 0}, 0.4, 0.45);
  std::vector<double> ref = cell_average_initial(g, RiemannData{1.0, -0.5, 0.0});
  const double dt = 0.45 * g.dx() / 1.0;
  double t = 0.0;
  while (t < 0.4) {
    const bool last = 0.4 - t <= dt;
    const double h = last ? 0.4 - t : dt;
    ref = oracle::burgers_godunov_step(ref, h, g.dx());
    t = last ? 0.4 : t + h;
  }
  double err = 0.0;
  for (int j = 0; j < g.cells(); ++j) err = std::max(err, std::abs(out.u[j] - ref[j]));
  CHECK(err <= 1e-12);
}

TEST_CASE("constant color reduces to the classical scheme for the frozen flux") {
  // With identity transmissions f(w, v) = (w + v)^2 / 2 + const, a shifted Burgers flux.
  const StaggeredGrid g(-1.0, 1.0, 100);
  const double v = 0.3;
  const auto m = make_model("burgers", "burgers_shifted", Transmission::identity_map(), -1.0, 1.5);
  const WellBalancedScheme scheme(g, m, std::vector<double>(g.interfaces(), v));
  SchemeState state{cell_average_initial(g, RiemannData{-1.0, 1.5, 0.1}), 0.0, 0};
  const double dt = scheme.cfl_dt(0.45);
  StepReport report;
  for (int n = 0; n < 60; ++n) {
    const std::vector<double> ext = apply_neumann_ghosts(state.u);
    std::vector<double> flux(g.interfaces());
    for (int i = 0; i < g.interfaces(); ++i)
      flux[i] = oracle::shifted_burgers_flux(oracle::shifted_burgers_riemann_trace(ext[i], ext[i + 1], v), v);
    std::vector<double> expected(g.cells());
    for (int j = 0; j < g.cells(); ++j) expected[j] = state.u[j] - dt / g.dx() * (flux[j + 1] - flux[j]);
    scheme.step(state, dt, report);
    for (int j = 0; j < g.cells(); ++j) CHECK(std::abs(state.u[j] - expected[j]) <= 1e-14);
  }
}

TEST_CASE("local maximum principle and sup-norm bound on random data") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> du(-1.0, 1.5);
  const StaggeredGrid g(-1.0, 1.0, 100);
  for (const Transmission& plus : {Transmission::identity_map(), Transmission::linear(2.0)}) {
    std::vector<double> u0(g.cells());
    for (double& x : u0) x = du(rng);
    const double lo = *std::min_element(u0.begin(), u0.end()), hi = *std::max_element(u0.begin(), u0.end());
    const auto m = make_model("burgers", "burgers_shifted", plus, lo, hi);
    const WellBalancedScheme scheme(g, m, cell_average_color(g, ColorFunction::erf_profile(0.05, 0.2)));
    SchemeState state{u0, 0.0, 0};
    StepReport report;
    const double dt = scheme.cfl_dt(0.5);
    for (int n = 0; n < 100; ++n) {
      const std::vector<double> prev = state.u;
      scheme.step(state, dt, report);
      CHECK(max_principle_violation(prev, state.u) <= 1e-12);
      CHECK(*std::min_element(state.u.begin(), state.u.end()) >= lo - 1e-12);
      CHECK(*std::max_element(state.u.begin(), state.u.end()) <= hi + 1e-12);
    }
  }
}

TEST_CASE("decoupled conservation telescopes to the boundary fluxes") {
  const StaggeredGrid g(-1.0, 1.0, 200);
  const auto m = make_model("burgers_shifted", "burgers_shifted", Transmission::identity_map(), 0.2, 0.8);
  const WellBalancedScheme scheme(g, m, std::vector<double>(g.interfaces(), 0.6));
  std::vector<double> u0 =
      cell_average_initial(g, std::function<double(double)>([](double x) {
                             return std::abs(x) < 0.3 ? 0.2 + 0.6 * std::cos(x / 0.3 * 1.5707963267948966) : 0.2;
                           }));
  SchemeState state{u0, 0.0, 0};
  StepReport report;
  const double dt = scheme.cfl_dt(0.45);
  for (int n = 0; n < 100; ++n) {
    scheme.step(state, dt, report);
    const double before = std::accumulate(report.w_cell.begin(), report.w_cell.end(), 0.0) * g.dx();
    const double after = std::accumulate(report.w_cell_next.begin(), report.w_cell_next.end(), 0.0) * g.dx();
    const double boundary = dt * (report.g.back() - report.g.front());
    CHECK(std::abs(after - before + boundary) <= 1e-12);
  }
}

TEST_CASE("run bookkeeping") {
  const StaggeredGrid g(-1.0, 1.0, 50);
  const auto m = make_model("burgers", "burgers_shifted", Transmission::identity_map(), -1.0, 1.5);
  const WellBalancedScheme scheme(g, m, cell_average_color(g, ColorFunction::erf_profile(0.05)));
  SchemeState start{cell_average_initial(g, RiemannData{-1.0, 1.5, 0.0}), 0.25, 3};
  const SchemeState same = scheme.run(start, 0.25, 0.45);
  CHECK(same.n == 3);
  CHECK(same.u == start.u);
  long observed = 0;
  const SchemeState out = scheme.run(start, 0.3, 0.45, [&](const SchemeState& before, const SchemeState& after,
                                                            const StepReport& report) {
    ++observed;
    CHECK(after.n == before.n + 1);
    CHECK(report.dt > 0.0);
  });
  CHECK(out.t == 0.3);
  CHECK(out.n - 3 == observed);
  CHECK_THROWS_AS(scheme.run(start, 0.3, 0.45, {}, 2), InputError);
  CHECK_THROWS_AS(scheme.run(start, 0.1, 0.45), InputError);
}

TEST_CASE("inversion failure is fatal and names the cell") {
  const StaggeredGrid g(-1.0, 1.0, 20);
  const auto m = make_model("burgers", "burgers_shifted", Transmission::linear(2.0), -1.0, 1.5);
  const WellBalancedScheme scheme(g, m, cell_average_color(g, ColorFunction::erf_profile(0.1)));
  SchemeState state{cell_average_initial(g, RiemannData{-1.0, 1.5, 0.0}), 0.0, 0};
  StepReport report;
  try {
    scheme.step(state, 50.0 * g.dx(), report);
    FAIL("expected a bracket failure");
  } catch (const BracketError& e) {
    CHECK(std::string(e.what()).find("cell") != std::string::npos);
  }
}

TEST_CASE("scheme input validation") {
  const StaggeredGrid g(-1.0, 1.0, 10);
  const auto m = make_model("burgers", "burgers_shifted", Transmission::identity_map(), -1.0, 1.5);
  CHECK_THROWS_AS(WellBalancedScheme(g, m, std::vector<double>(10, 0.0)), InputError);
  CHECK_THROWS_AS(WellBalancedScheme(g, m, std::vector<double>(11, 1.5)), InputError);
  const WellBalancedScheme scheme(g, m, std::vector<double>(11, 0.5));
  SchemeState bad{std::vector<double>(9, 0.0), 0.0, 0};
  StepReport report;
  CHECK_THROWS_AS(scheme.step(bad, 0.01, report), InputError);
  SchemeState ok{std::vector<double>(10, 0.0), 0.0, 0};
  CHECK_THROWS_AS(scheme.step(ok, 0.0, report), InputError);
  const auto [next, rep] = scheme.step(ok, 0.01);
  CHECK(next.n == 1);
  CHECK(rep.cells() == 10);
}

#include "couplefv/numerical_flux.hpp"

#include <algorithm>
#include <cmath>

#include "couplefv/errors.hpp"
#include "couplefv/numerics.hpp"

namespace couplefv {

namespace {

constexpr int kFallbackSamples = 65;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

ScalarFlux::ScalarFlux(ScalarFn f, ScalarFn df, std::vector<double> critical_points, double lo,
                       double hi)
    : f_(std::move(f)), df_(std::move(df)), critical_points_(std::move(critical_points)), lo_(lo),
      hi_(hi) {
  if (!f_ || !df_) throw InputError("scalar flux needs f and f'");
  if (lo_ > hi_) std::swap(lo_, hi_);
  std::sort(critical_points_.begin(), critical_points_.end());
}

std::pair<double, double> ScalarFlux::extrema_in(double a, double b) const {
  if (a > b) std::swap(a, b);
  double mn = std::min(f_(a), f_(b));
  double mx = std::max(f_(a), f_(b));
  if (a == b) return {mn, mx};
  auto first = std::upper_bound(critical_points_.begin(), critical_points_.end(), a);
  for (auto it = first; it != critical_points_.end() && *it < b; ++it) {
    const double value = f_(*it);
    mn = std::min(mn, value);
    mx = std::max(mx, value);
  }
  if (a >= lo_ && b <= hi_) return {mn, mx};

  // Outside the resolved interval: locate candidates by sampling, then refine.
  std::vector<double> xs(kFallbackSamples), fs(kFallbackSamples);
  for (int i = 0; i < kFallbackSamples; ++i) {
    xs[i] = std::lerp(a, b, static_cast<double>(i) / (kFallbackSamples - 1));
    fs[i] = f_(xs[i]);
  }
  const auto imin = std::distance(fs.begin(), std::min_element(fs.begin(), fs.end()));
  const auto imax = std::distance(fs.begin(), std::max_element(fs.begin(), fs.end()));
  auto refine = [&](std::ptrdiff_t i, const ScalarFn& g) {
    const double left = xs[std::max<std::ptrdiff_t>(i - 1, 0)];
    const double right = xs[std::min<std::ptrdiff_t>(i + 1, kFallbackSamples - 1)];
    return numerics::golden_section_min(g, left, right);
  };
  const double xmin = refine(imin, f_);
  const double xmax = refine(imax, [this](double x) { return -f_(x); });
  mn = std::min({mn, fs[imin], f_(xmin)});
  mx = std::max({mx, fs[imax], f_(xmax)});
  return {mn, mx};
}

double ScalarFlux::max_abs_derivative(double a, double b) const {
  if (a > b) std::swap(a, b);
  double s = std::max(std::abs(df_(a)), std::abs(df_(b)));
  if (a == b) return s;
  constexpr int interior = 17;
  for (int i = 1; i <= interior; ++i) s = std::max(s, std::abs(df_(a + (b - a) * i / (interior + 1))));
  return s;
}

double ScalarFlux::reference_point() const {
  double best_x = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  auto consider = [&](double x) {
    if (!std::isfinite(x)) return;
    const double value = f_(x);
    if (value < best_f) {
      best_f = value;
      best_x = x;
    }
  };
  for (double c : critical_points_)
    if (c >= lo_ && c <= hi_) consider(c);
  consider(lo_);
  consider(hi_);
  return best_x;
}

ScalarFlux frozen_flux(const CouplingModel& model, double v) {
  const WorkingRange& range = model.range();
  std::vector<double> critical;
  for (double u : model.flux_critical_points_u(v, range.lo, range.hi)) critical.push_back(model.c0(u, v));
  const CouplingModel* m = &model;
  return ScalarFlux([m, v](double w) { return m->w_flux(w, v); },
                    [m, v](double w) { return m->eigenvalue(m->u_of_w(w, v), v); },
                    std::move(critical), model.c0(range.lo, v), model.c0(range.hi, v));
}

FluxScheme parse_flux_scheme(std::string_view name) {
  if (name == "godunov") return FluxScheme::godunov;
  if (name == "engquist-osher") return FluxScheme::engquist_osher;
  if (name == "rusanov") return FluxScheme::rusanov;
  throw InputError("unknown flux scheme '" + std::string(name) + "'");
}

std::string_view to_string(FluxScheme scheme) {
  switch (scheme) {
    case FluxScheme::godunov:
      return "godunov";
    case FluxScheme::engquist_osher:
      return "engquist-osher";
    case FluxScheme::rusanov:
      return "rusanov";
  }
  return "godunov";
}

double godunov(double a, double b, const ScalarFlux& flux) {
  if (a == b) return flux(a);
  const auto [mn, mx] = flux.extrema_in(a, b);
  return a <= b ? mn : mx;
}

namespace {

// int_p^q max(f', 0) for p <= q.
double positive_variation(double p, double q, const ScalarFlux& flux) {
  if (p == q) return 0.0;
  if (p < flux.lo() || q > flux.hi()) {
    return numerics::adaptive_simpson(
        [&](double x) { return std::max(flux.derivative(x), 0.0); }, p, q);
  }
  double total = 0.0;
  double f_left = flux(p);
  auto crits = flux.critical_points();
  for (auto it = std::upper_bound(crits.begin(), crits.end(), p); it != crits.end() && *it < q; ++it) {
    const double f_c = flux(*it);
    total += std::max(f_c - f_left, 0.0);
    f_left = f_c;
  }
  return total + std::max(flux(q) - f_left, 0.0);
}

// int_omega^x max(f', 0), oriented.
double oriented_positive(double omega, double x, const ScalarFlux& flux) {
  return x >= omega ? positive_variation(omega, x, flux) : -positive_variation(x, omega, flux);
}

}  // namespace

double engquist_osher(double a, double b, const ScalarFlux& flux) {
  if (a == b) return flux(a);
  const double omega = flux.reference_point();
  const double f_omega = flux(omega);
  const double pos_a = oriented_positive(omega, a, flux);
  const double neg_b = (flux(b) - f_omega) - oriented_positive(omega, b, flux);
  return f_omega + pos_a + neg_b;
}

double rusanov(double a, double b, const ScalarFlux& flux) {
  if (a == b) return flux(a);
  const double s = flux.max_abs_derivative(a, b);
  return 0.5 * (flux(a) + flux(b)) - 0.5 * s * (b - a);
}

double numerical_flux(FluxScheme scheme, double a, double b, const ScalarFlux& flux) {
  switch (scheme) {
    case FluxScheme::godunov:
      return godunov(a, b, flux);
    case FluxScheme::engquist_osher:
      return engquist_osher(a, b, flux);
    case FluxScheme::rusanov:
      return rusanov(a, b, flux);
  }
  return godunov(a, b, flux);
}

double numerical_entropy_flux_kruzhkov(double a, double b, double k, const ScalarFlux& flux,
                                       FluxScheme scheme) {
  return numerical_flux(scheme, std::max(a, k), std::max(b, k), flux) -
         numerical_flux(scheme, std::min(a, k), std::min(b, k), flux);
}

double kruzhkov_flux(double w, double k, const ScalarFlux& flux) {
  if (w == k) return 0.0;
  return sgn(w - k) * (flux(w) - flux(k));
}

}  // namespace couplefv

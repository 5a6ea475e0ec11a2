/// @file numerical_flux.hpp
/// @brief Two-point monotone fluxes for the frozen-color conservation law
///        d_t w + d_x f(w, v_{j+1/2}) = 0, and the matching numerical
///        Kruzhkov entropy flux.
#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "couplefv/coupling_model.hpp"

namespace couplefv {

/// Scalar flux w -> f(w) with derivative and exact interval extrema.
///
/// The critical-point list is complete on [lo, hi]; queries reaching outside
/// that interval fall back to dense sampling refined by golden-section search.
class ScalarFlux {
 public:
  ScalarFlux(ScalarFn f, ScalarFn df, std::vector<double> critical_points,
             double lo = -std::numeric_limits<double>::infinity(),
             double hi = std::numeric_limits<double>::infinity());

  double operator()(double w) const { return f_(w); }
  double derivative(double w) const { return df_(w); }
  std::span<const double> critical_points() const { return critical_points_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// (min, max) of f over [min(a, b), max(a, b)].
  std::pair<double, double> extrema_in(double a, double b) const;
  /// max |f'| over [min(a, b), max(a, b)].
  double max_abs_derivative(double a, double b) const;
  /// Global minimizer of f over [lo, hi] (sonic point for convex fluxes).
  double reference_point() const;

 private:
  ScalarFn f_;
  ScalarFn df_;
  std::vector<double> critical_points_;
  double lo_;
  double hi_;
};

/// w -> f(w, v) for a fixed color value, with critical points resolved on
/// the w-image of the model's working range.
ScalarFlux frozen_flux(const CouplingModel& model, double v);

enum class FluxScheme { godunov, engquist_osher, rusanov };

/// Accepts "godunov", "engquist-osher", "rusanov".
FluxScheme parse_flux_scheme(std::string_view name);
std::string_view to_string(FluxScheme scheme);

/// min f over [a, b] if a <= b, max f over [b, a] otherwise.
double godunov(double a, double b, const ScalarFlux& flux);
/// f(omega) + int_omega^a max(f', 0) + int_omega^b min(f', 0), evaluated exactly
/// on the monotone pieces between critical points.
double engquist_osher(double a, double b, const ScalarFlux& flux);
/// Local Lax-Friedrichs: (f(a) + f(b)) / 2 - s (b - a) / 2, s = max |f'| on the hull.
double rusanov(double a, double b, const ScalarFlux& flux);

double numerical_flux(FluxScheme scheme, double a, double b, const ScalarFlux& flux);

/// Crandall-Majda entropy flux for U = |w - k|:
/// g(max(a, k), max(b, k)) - g(min(a, k), min(b, k)).
double numerical_entropy_flux_kruzhkov(double a, double b, double k, const ScalarFlux& flux,
                                       FluxScheme scheme);

/// sgn(w - k) (f(w) - f(k)).
double kruzhkov_flux(double w, double k, const ScalarFlux& flux);

}  // namespace couplefv

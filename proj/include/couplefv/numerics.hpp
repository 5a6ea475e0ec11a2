/// @file numerics.hpp
/// @brief Scalar root finding and adaptive quadrature used across the solver.
#pragma once

#include <functional>

namespace couplefv::numerics {

using ScalarFn = std::function<double(double)>;

struct SolveOptions {
  double rel_tol = 1e-12;  ///< stop when |f(x) - target| <= rel_tol * max(1, |target|)
  int max_iterations = 100;
};

/// Solves f(x) = target for a strictly increasing f on [lo, hi].
///
/// Safeguarded Newton iteration started at @p guess, falling back to bisection
/// whenever a Newton iterate leaves the current bracket. Once the residual
/// tolerance is met, a few extra Newton steps polish the root to rounding level.
/// Throws BracketError when target lies outside [f(lo), f(hi)] or the iteration
/// cap is reached.
double solve_increasing(const ScalarFn& f, const ScalarFn& df, double target, double guess,
                        double lo, double hi, const SolveOptions& options = {});

/// Finds a root of @p g inside [a, b] given g(a) and g(b) of opposite sign.
double bisect_sign_change(const ScalarFn& g, double a, double b);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 40;
};

/// Adaptive Simpson quadrature of @p f over [a, b] (a > b allowed, sign flips).
double adaptive_simpson(const ScalarFn& f, double a, double b, const QuadratureOptions& options = {});

/// Golden-section search for a local minimizer of @p f on [a, b].
double golden_section_min(const ScalarFn& f, double a, double b, double tol = 1e-12);

}  // namespace couplefv::numerics

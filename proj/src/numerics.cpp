#include "couplefv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "couplefv/errors.hpp"

namespace couplefv::numerics {

namespace {

[[noreturn]] void throw_bracket(double target, double lo, double hi, double f_lo, double f_hi) {
  std::ostringstream os;
  os.precision(17);
  os << "target " << target << " outside the image [" << f_lo << ", " << f_hi << "] of ["
     << lo << ", " << hi << "]";
  throw BracketError(os.str());
}

double bisect_to_tolerance(const ScalarFn& f, double target, double a, double b, double tol,
                           int max_iterations) {
  double best = 0.5 * (a + b);
  for (int it = 0; it < max_iterations + 64; ++it) {
    best = 0.5 * (a + b);
    const double r = f(best) - target;
    if (r == 0.0 || std::abs(r) <= tol) return best;
    if (r < 0.0)
      a = best;
    else
      b = best;
    if (!(b - a > 0.0)) return best;
  }
  if (std::abs(f(best) - target) <= tol) return best;
  throw BracketError("bisection did not reach the residual tolerance");
}

}  // namespace

double solve_increasing(const ScalarFn& f, const ScalarFn& df, double target, double guess,
                        double lo, double hi, const SolveOptions& options) {
  const double tol = options.rel_tol * std::max(1.0, std::abs(target));
  double a = lo, b = hi;
  double x = std::clamp(guess, lo, hi);
  double r = f(x) - target;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (r == 0.0) return x;
    if (r < 0.0)
      a = x;
    else
      b = x;
    if (std::abs(r) <= tol) break;
    const double slope = df(x);
    double next = (slope > 0.0) ? x - r / slope : a - 1.0;
    if (!(next > a && next < b)) {
      // Newton left the bracket: the bracket must be validated before bisecting.
      const double f_lo = f(lo), f_hi = f(hi);
      if (target < f_lo || target > f_hi) throw_bracket(target, lo, hi, f_lo, f_hi);
      return bisect_to_tolerance(f, target, a, b, tol, options.max_iterations);
    }
    x = next;
    r = f(x) - target;
  }
  if (std::abs(r) > tol) throw BracketError("Newton iteration cap reached");

  // Polish: keep taking Newton steps while the residual strictly decreases.
  for (int k = 0; k < 3 && r != 0.0; ++k) {
    const double slope = df(x);
    if (!(slope > 0.0)) break;
    const double next = x - r / slope;
    if (!(next >= lo && next <= hi)) break;
    const double r_next = f(next) - target;
    if (!(std::abs(r_next) < std::abs(r))) break;
    x = next;
    r = r_next;
  }
  return x;
}

double bisect_sign_change(const ScalarFn& g, double a, double b) {
  double ga = g(a);
  if (ga == 0.0) return a;
  const double gb = g(b);
  if (gb == 0.0) return b;
  if ((ga < 0.0) == (gb < 0.0)) throw BracketError("no sign change on the interval");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

namespace {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const ScalarFn& f, const SimpsonPanel& p, double tol, int depth,
                       int max_depth) {
  const double lm = 0.5 * (p.a + p.m), rm = 0.5 * (p.m + p.b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth) throw QuadratureError("adaptive Simpson depth cap reached");
  return simpson_recurse(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1,
                         max_depth) +
         simpson_recurse(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1,
                         max_depth);
}

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, const QuadratureOptions& options) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, options);
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  // Split once up front so symmetric integrands cannot fool the first error estimate.
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  SimpsonPanel left{a, lm, m, fa, flm, fm, simpson(a, m, fa, flm, fm)};
  SimpsonPanel right{m, rm, b, fm, frm, fb, simpson(m, b, fm, frm, fb)};
  return simpson_recurse(f, left, 0.5 * options.abs_tol, 1, options.max_depth) +
         simpson_recurse(f, right, 0.5 * options.abs_tol, 1, options.max_depth);
}

double golden_section_min(const ScalarFn& f, double a, double b, double tol) {
  if (a > b) std::swap(a, b);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (!(d > c)) break;
  }
  return (fc <= fd) ? c : d;
}

}  // namespace couplefv::numerics

#include "couplefv/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "couplefv/errors.hpp"

namespace couplefv {

StaggeredGrid::StaggeredGrid(double x_min, double x_max, int cells)
    : x_min_(x_min), x_max_(x_max), cells_(cells), dx_((x_max - x_min) / cells) {
  if (cells < 1) throw InputError("grid needs at least one cell");
  if (!(x_max > x_min) || !std::isfinite(dx_)) throw InputError("grid needs x_max > x_min");
}

ColorFunction ColorFunction::erf_profile(double eta, double zeta) {
  if (!(eta > 0.0)) throw InputError("erf profile needs eta > 0");
  ColorFunction c;
  c.kind = Kind::erf_profile;
  c.eta = eta;
  c.zeta = zeta;
  return c;
}

ColorFunction ColorFunction::constant(double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw InputError("constant color must lie in [0, 1]");
  ColorFunction c;
  c.kind = Kind::constant;
  c.value = value;
  return c;
}

ColorFunction ColorFunction::heaviside() {
  ColorFunction c;
  c.kind = Kind::heaviside;
  return c;
}

double ColorFunction::operator()(double x) const {
  switch (kind) {
    case Kind::erf_profile:
      return 0.5 * (erf(x / eta + zeta) + 1.0);
    case Kind::constant:
      return value;
    case Kind::heaviside:
      return x < 0.0 ? 0.0 : 1.0;
  }
  return value;
}

double erf(double x) {
  if (x > 6.0) return 1.0;
  if (x < -6.0) return -1.0;
  return std::erf(x);
}

namespace {

// Antiderivative of erfc: H(t) = t erfc(t) - exp(-t^2) / sqrt(pi). Both terms
// decay for large t, so differences of H carry no cancellation against O(1) values.
double erfc_antiderivative(double t) {
  return t * std::erfc(t) - std::exp(-t * t) / std::sqrt(std::numbers::pi);
}

// Mean of (1 + erf(s)) / 2 over s in [a, b], a < b <= 0. Equals erfc(-s) / 2.
double mean_lower_tail(double a, double b) {
  return (erfc_antiderivative(-a) - erfc_antiderivative(-b)) / (2.0 * (b - a));
}

// Mean of (1 + erf(s)) / 2 over [a, b] for any a < b.
double mean_half_erf(double a, double b) {
  if (b <= 0.0) return mean_lower_tail(a, b);
  if (a >= 0.0) return 1.0 - mean_lower_tail(-b, -a);
  const double wl = -a / (b - a);
  return wl * mean_lower_tail(a, 0.0) + (1.0 - wl) * (1.0 - mean_lower_tail(-b, 0.0));
}

}  // namespace

std::vector<double> cell_average_color(const StaggeredGrid& grid, const ColorFunction& color) {
  std::vector<double> v(grid.interfaces());
  const double dx = grid.dx();
  for (int i = 0; i < grid.interfaces(); ++i) {
    const double a = grid.interface(i) - 0.5 * dx;
    const double b = grid.interface(i) + 0.5 * dx;
    double avg = 0.0;
    switch (color.kind) {
      case ColorFunction::Kind::constant:
        avg = color.value;
        break;
      case ColorFunction::Kind::heaviside:
        avg = std::clamp(b / dx, 0.0, 1.0);
        if (a >= 0.0) avg = 1.0;
        if (b <= 0.0) avg = 0.0;
        break;
      case ColorFunction::Kind::erf_profile:
        avg = mean_half_erf(a / color.eta + color.zeta, b / color.eta + color.zeta);
        break;
    }
    v[i] = std::clamp(avg, 0.0, 1.0);
  }
  if (color.kind == ColorFunction::Kind::erf_profile) {
    // Rounding may break monotonicity by an ulp; the profile is nondecreasing.
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
  }
  return v;
}

std::vector<double> cell_average_initial(const StaggeredGrid& grid, const InitialProfile& u0) {
  std::vector<double> u(grid.cells());
  const double dx = grid.dx();
  if (const auto* riemann = std::get_if<RiemannData>(&u0)) {
    for (int j = 0; j < grid.cells(); ++j) {
      const double a = grid.interface(j), b = grid.interface(j + 1);
      if (b <= riemann->jump) {
        u[j] = riemann->left;
      } else if (a >= riemann->jump) {
        u[j] = riemann->right;
      } else {
        const double frac = (riemann->jump - a) / dx;
        u[j] = frac * riemann->left + (1.0 - frac) * riemann->right;
      }
    }
    return u;
  }
  const auto& profile = std::get<std::function<double(double)>>(u0);
  if (!profile) throw InputError("initial profile function is empty");
  static constexpr std::array<double, 5> nodes = {
      -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {
      0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
      0.2369268850561891};
  for (int j = 0; j < grid.cells(); ++j) {
    const double c = grid.center(j);
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) sum += weights[q] * profile(c + 0.5 * dx * nodes[q]);
    u[j] = 0.5 * sum;
  }
  return u;
}

std::vector<double> apply_neumann_ghosts(std::span<const double> values) {
  if (values.empty()) throw InputError("cannot extend an empty array");
  std::vector<double> out;
  out.reserve(values.size() + 2);
  out.push_back(values.front());
  out.insert(out.end(), values.begin(), values.end());
  out.push_back(values.back());
  return out;
}

}  // namespace couplefv

/// @file grid.hpp
/// @brief Staggered uniform grid, color functions and exact cell averaging.
///
/// u lives on the cells (x_{j-1/2}, x_{j+1/2}), j = 0..J-1. The color v lives on
/// the shifted cells (x_{j-1}, x_j) centred on the interfaces, one value per
/// interface including both domain edges, so a v array has J + 1 entries and
/// v[j], v[j + 1] are the values seen by the left and right halves of u-cell j.
#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace couplefv {

class StaggeredGrid {
 public:
  StaggeredGrid(double x_min, double x_max, int cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int cells() const { return cells_; }
  int interfaces() const { return cells_ + 1; }
  double dx() const { return dx_; }

  /// Centre x_j of u-cell j.
  double center(int j) const { return x_min_ + (j + 0.5) * dx_; }
  /// Location of interface i (left edge of u-cell i).
  double interface(int i) const { return x_min_ + i * dx_; }

 private:
  double x_min_;
  double x_max_;
  int cells_;
  double dx_;
};

/// Interface profile v(x) with values in [0, 1].
struct ColorFunction {
  enum class Kind { erf_profile, constant, heaviside };

  Kind kind = Kind::constant;
  double eta = 1.0;    ///< thickness (erf_profile)
  double zeta = 0.0;   ///< shift (erf_profile)
  double value = 0.0;  ///< level (constant)

  /// v(x) = (erf(x / eta + zeta) + 1) / 2.
  static ColorFunction erf_profile(double eta, double zeta = 0.0);
  static ColorFunction constant(double c);
  /// 0 for x < 0, 1 for x > 0.
  static ColorFunction heaviside();

  double operator()(double x) const;
};

/// Error function, accurate to rounding; odd and clamped to +/-1 for |x| > 6.
double erf(double x);

/// v_{i} = (1/dx) * integral of v over (x_{i-1}, x_i), exact for every kind.
std::vector<double> cell_average_color(const StaggeredGrid& grid, const ColorFunction& color);

/// Piecewise-constant data: @p left for x < jump, @p right for x > jump.
struct RiemannData {
  double left = 0.0;
  double right = 0.0;
  double jump = 0.0;
};

using InitialProfile = std::variant<RiemannData, std::function<double(double)>>;

/// Cell averages of u0. Riemann data is averaged exactly; smooth maps use
/// five-point Gauss-Legendre quadrature per cell.
std::vector<double> cell_average_initial(const StaggeredGrid& grid, const InitialProfile& u0);

/// Zero-gradient extension: one ghost copy of each edge value.
/// Throws InputError on an empty array.
std::vector<double> apply_neumann_ghosts(std::span<const double> values);

}  // namespace couplefv

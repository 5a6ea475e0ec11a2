/// @file coupling_model.hpp
/// @brief Continuous coupling mathematics: transmission maps, the augmented maps
///        C0/C1, the w <-> u change of variables and entropy pairs.
///
/// Two scalar laws  d_t w + d_x f^-(w) = 0  (x < 0)  and  d_t w + d_x f^+(w) = 0
/// (x > 0)  are coupled through  theta_-(w(0-)) = theta_+(w(0+)).  With
/// u = theta_(+/-)(w) and a color function v in [0, 1] the problem is rewritten as
///
///     C0(u, v) = (1 - v) gamma_-(u) + v gamma_+(u)
///     C1(u, v) = (1 - v) f^-(gamma_-(u)) + v f^+(gamma_+(u))
///
/// where gamma_(+/-) are the inverses of theta_(+/-). Everything in this header
/// is a pure function of immutable data and may be called concurrently.
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace couplefv {

using ScalarFn = std::function<double(double)>;

/// Strictly increasing transmission map theta with its inverse gamma.
///
/// When gamma/dgamma are left empty the owning CouplingModel inverts theta
/// numerically.
struct Transmission {
  std::string name;
  ScalarFn theta;
  ScalarFn dtheta;
  ScalarFn gamma;
  ScalarFn dgamma;
  bool identity = false;

  static Transmission identity_map();
  /// theta(w) = c * w, c > 0.
  static Transmission linear(double c);
  /// Catalog lookup: "identity" or "linear(c)".
  static Transmission from_name(const std::string& name);
};

struct TransmissionPair {
  Transmission minus;
  Transmission plus;
};

/// Scalar flux f(w) with derivative and its interior extrema.
struct FluxFunction {
  std::string name;
  ScalarFn f;
  ScalarFn df;
  std::vector<double> critical_points;

  static FluxFunction burgers();          ///< w^2 / 2
  static FluxFunction burgers_shifted();  ///< (w + 1)^2 / 2
  /// Catalog lookup: "burgers" or "burgers_shifted".
  static FluxFunction from_name(const std::string& name);
};

struct FluxPair {
  FluxFunction minus;
  FluxFunction plus;
};

/// Working interval [lo, hi] of the u variable (inf/sup of the initial data).
struct WorkingRange {
  double lo = 0.0;
  double hi = 0.0;
};

enum class EntropyKind { quadratic, kruzhkov, exponential, smoothed_abs, custom };

/// Convex entropy U(w) with its first two derivatives.
struct EntropyPair {
  EntropyKind kind = EntropyKind::custom;
  double k = 0.0;      ///< Kruzhkov / smoothed-abs center
  double delta = 0.0;  ///< smoothing width for smoothed_abs
  ScalarFn U;
  ScalarFn dU;
  ScalarFn d2U;

  static EntropyPair quadratic();                    ///< w^2 / 2
  static EntropyPair kruzhkov(double k);             ///< |w - k|
  static EntropyPair exponential();                  ///< exp(w)
  static EntropyPair smoothed_abs(double k, double delta);  ///< sqrt((w-k)^2 + delta^2)

  /// (min, max) of U'' over [lo, hi]. Exact for the built-in kinds, sampled otherwise.
  /// The Kruzhkov entropy has U'' = 0 away from k and reports (0, +inf) when k is inside.
  std::pair<double, double> hessian_bounds(double lo, double hi) const;
  /// Lower bound sigma_U of U'' over [lo, hi].
  double convexity_modulus(double lo, double hi) const { return hessian_bounds(lo, hi).first; }
};

class CouplingModel {
 public:
  CouplingModel(FluxPair fluxes, TransmissionPair transmission, WorkingRange range);

  const FluxPair& fluxes() const { return fluxes_; }
  const TransmissionPair& transmission() const { return transmission_; }
  const WorkingRange& range() const { return range_; }
  /// Both transmission maps are the identity, so w = u for every v.
  bool identity_transmission() const { return identity_; }

  double gamma_minus(double u) const;
  double gamma_plus(double u) const;
  double dgamma_minus(double u) const;
  double dgamma_plus(double u) const;

  double c0(double u, double v) const;
  double c1(double u, double v) const;
  double dc0_du(double u, double v) const;
  double dc1_du(double u, double v) const;

  /// Inverse of C0(., v). Throws BracketError if w is not attained for
  /// u in [m - 1, M + 1].
  double u_of_w(double w, double v) const;
  /// Same, with a starting guess for the Newton iteration.
  double u_of_w(double w, double v, double guess) const;

  /// f(w, v) = C1(u(w, v), v).
  double w_flux(double w, double v) const;
  /// Coefficient f^+(gamma_+(u)) - f^-(gamma_-(u)) of d_x v in the balance law.
  double source_coeff(double u) const;
  /// Nontrivial eigenvalue d_u C1 / d_u C0 (equals d_w f(w, v)).
  double eigenvalue(double u, double v) const;

  /// Q(u, v) = int_m^u U'(C0(s, v)) d_u C1(s, v) ds by adaptive quadrature.
  double entropy_flux_q(double u, double v, const EntropyPair& entropy) const;
  /// Closed form sgn(w - k) (f(w, v) - f(k, v)) of the Kruzhkov entropy flux.
  double kruzhkov_entropy_flux(double w, double v, double k) const;

  /// Bracket [m - 1, M + 1] searched by every u-inversion.
  std::pair<double, double> inversion_bracket() const { return {range_.lo - 1.0, range_.hi + 1.0}; }

  /// Zeros of u -> d_u C1(u, v) where the derivative changes sign, restricted to
  /// [lo, hi]. These are the u-locations of the extrema of w -> f(w, v).
  std::vector<double> flux_critical_points_u(double v, double lo, double hi) const;

 private:
  FluxPair fluxes_;
  TransmissionPair transmission_;
  WorkingRange range_;
  bool identity_;
};

}  // namespace couplefv

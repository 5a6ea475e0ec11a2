#include "couplefv/coupling_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "couplefv/errors.hpp"
#include "couplefv/numerics.hpp"

namespace couplefv {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Inverts a strictly increasing theta by expanding a bracket around the guess.
double invert_theta(const Transmission& t, double u) {
  double lo = u - 1.0, hi = u + 1.0;
  for (int k = 0; k < 64 && t.theta(lo) > u; ++k) lo -= (hi - lo);
  for (int k = 0; k < 64 && t.theta(hi) < u; ++k) hi += (hi - lo);
  return numerics::solve_increasing(t.theta, t.dtheta, u, u, lo, hi);
}

double eval_gamma(const Transmission& t, double u) {
  if (t.identity) return u;
  if (t.gamma) return t.gamma(u);
  return invert_theta(t, u);
}

double eval_dgamma(const Transmission& t, double u) {
  if (t.identity) return 1.0;
  if (t.dgamma) return t.dgamma(u);
  return 1.0 / t.dtheta(eval_gamma(t, u));
}

}  // namespace

Transmission Transmission::identity_map() {
  Transmission t;
  t.name = "identity";
  t.theta = [](double w) { return w; };
  t.dtheta = [](double) { return 1.0; };
  t.gamma = [](double u) { return u; };
  t.dgamma = [](double) { return 1.0; };
  t.identity = true;
  return t;
}

Transmission Transmission::linear(double c) {
  if (!(c > 0.0)) throw InputError("linear transmission needs a positive slope");
  Transmission t;
  t.name = "linear(" + std::to_string(c) + ")";
  t.theta = [c](double w) { return c * w; };
  t.dtheta = [c](double) { return c; };
  t.gamma = [c](double u) { return u / c; };
  t.dgamma = [c](double) { return 1.0 / c; };
  t.identity = (c == 1.0);
  return t;
}

Transmission Transmission::from_name(const std::string& name) {
  if (name == "identity") return identity_map();
  static const std::regex linear_re(R"(\s*linear\s*\(\s*([^)\s]+)\s*\)\s*)");
  std::smatch match;
  if (std::regex_match(name, match, linear_re)) {
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(match[1].str(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != match[1].str().size()) throw InputError("bad slope in transmission '" + name + "'");
    return linear(c);
  }
  throw InputError("unknown transmission '" + name + "'");
}

FluxFunction FluxFunction::burgers() {
  return {"burgers", [](double w) { return 0.5 * w * w; }, [](double w) { return w; }, {0.0}};
}

FluxFunction FluxFunction::burgers_shifted() {
  return {"burgers_shifted", [](double w) { return 0.5 * (w + 1.0) * (w + 1.0); },
          [](double w) { return w + 1.0; }, {-1.0}};
}

FluxFunction FluxFunction::from_name(const std::string& name) {
  if (name == "burgers") return burgers();
  if (name == "burgers_shifted") return burgers_shifted();
  throw InputError("unknown flux '" + name + "'");
}

EntropyPair EntropyPair::quadratic() {
  EntropyPair e;
  e.kind = EntropyKind::quadratic;
  e.U = [](double w) { return 0.5 * w * w; };
  e.dU = [](double w) { return w; };
  e.d2U = [](double) { return 1.0; };
  return e;
}

EntropyPair EntropyPair::kruzhkov(double k) {
  EntropyPair e;
  e.kind = EntropyKind::kruzhkov;
  e.k = k;
  e.U = [k](double w) { return std::abs(w - k); };
  e.dU = [k](double w) { return sgn(w - k); };
  e.d2U = [](double) { return 0.0; };
  return e;
}

EntropyPair EntropyPair::exponential() {
  EntropyPair e;
  e.kind = EntropyKind::exponential;
  e.U = [](double w) { return std::exp(w); };
  e.dU = e.U;
  e.d2U = e.U;
  return e;
}

EntropyPair EntropyPair::smoothed_abs(double k, double delta) {
  if (!(delta > 0.0)) throw InputError("smoothed |w - k| needs delta > 0");
  EntropyPair e;
  e.kind = EntropyKind::smoothed_abs;
  e.k = k;
  e.delta = delta;
  e.U = [k, delta](double w) { return std::hypot(w - k, delta); };
  e.dU = [k, delta](double w) { return (w - k) / std::hypot(w - k, delta); };
  e.d2U = [k, delta](double w) {
    const double r = std::hypot(w - k, delta);
    return delta * delta / (r * r * r);
  };
  return e;
}

std::pair<double, double> EntropyPair::hessian_bounds(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  switch (kind) {
    case EntropyKind::quadratic:
      return {1.0, 1.0};
    case EntropyKind::exponential:
      return {std::exp(lo), std::exp(hi)};
    case EntropyKind::kruzhkov:
      return {0.0, (k > lo && k < hi) ? std::numeric_limits<double>::infinity() : 0.0};
    case EntropyKind::smoothed_abs: {
      const double peak = std::clamp(k, lo, hi);
      const double far = (std::abs(lo - k) > std::abs(hi - k)) ? lo : hi;
      return {d2U(far), d2U(peak)};
    }
    case EntropyKind::custom:
      break;
  }
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  constexpr int samples = 2001;
  for (int i = 0; i < samples; ++i) {
    const double x = std::lerp(lo, hi, static_cast<double>(i) / (samples - 1));
    const double h = d2U(x);
    mn = std::min(mn, h);
    mx = std::max(mx, h);
  }
  return {mn, mx};
}

CouplingModel::CouplingModel(FluxPair fluxes, TransmissionPair transmission, WorkingRange range)
    : fluxes_(std::move(fluxes)), transmission_(std::move(transmission)), range_(range) {
  if (!(range_.lo <= range_.hi)) throw InputError("working range must satisfy lo <= hi");
  if (!fluxes_.minus.f || !fluxes_.minus.df || !fluxes_.plus.f || !fluxes_.plus.df)
    throw InputError("flux functions and derivatives are required");
  for (const Transmission* t : {&transmission_.minus, &transmission_.plus})
    if (!t->theta || !t->dtheta) throw InputError("transmission theta and theta' are required");
  identity_ = transmission_.minus.identity && transmission_.plus.identity;
}

double CouplingModel::gamma_minus(double u) const { return eval_gamma(transmission_.minus, u); }
double CouplingModel::gamma_plus(double u) const { return eval_gamma(transmission_.plus, u); }
double CouplingModel::dgamma_minus(double u) const { return eval_dgamma(transmission_.minus, u); }
double CouplingModel::dgamma_plus(double u) const { return eval_dgamma(transmission_.plus, u); }

double CouplingModel::c0(double u, double v) const {
  if (identity_) return u;
  return (1.0 - v) * gamma_minus(u) + v * gamma_plus(u);
}

double CouplingModel::c1(double u, double v) const {
  if (v == 0.0) return fluxes_.minus.f(gamma_minus(u));
  if (v == 1.0) return fluxes_.plus.f(gamma_plus(u));
  return (1.0 - v) * fluxes_.minus.f(gamma_minus(u)) + v * fluxes_.plus.f(gamma_plus(u));
}

double CouplingModel::dc0_du(double u, double v) const {
  if (identity_) return 1.0;
  return (1.0 - v) * dgamma_minus(u) + v * dgamma_plus(u);
}

double CouplingModel::dc1_du(double u, double v) const {
  const double left = fluxes_.minus.df(gamma_minus(u)) * dgamma_minus(u);
  const double right = fluxes_.plus.df(gamma_plus(u)) * dgamma_plus(u);
  if (v == 0.0) return left;
  if (v == 1.0) return right;
  return (1.0 - v) * left + v * right;
}

double CouplingModel::u_of_w(double w, double v) const { return u_of_w(w, v, w); }

double CouplingModel::u_of_w(double w, double v, double guess) const {
  if (identity_) return w;
  const auto [lo, hi] = inversion_bracket();
  return numerics::solve_increasing([&](double u) { return c0(u, v); },
                                    [&](double u) { return dc0_du(u, v); }, w, guess, lo, hi);
}

double CouplingModel::w_flux(double w, double v) const { return c1(u_of_w(w, v), v); }

double CouplingModel::source_coeff(double u) const {
  return fluxes_.plus.f(gamma_plus(u)) - fluxes_.minus.f(gamma_minus(u));
}

double CouplingModel::eigenvalue(double u, double v) const { return dc1_du(u, v) / dc0_du(u, v); }

double CouplingModel::entropy_flux_q(double u, double v, const EntropyPair& entropy) const {
  auto integrand = [&](double s) { return entropy.dU(c0(s, v)) * dc1_du(s, v); };
  const double lo = range_.lo;
  if (entropy.kind == EntropyKind::kruzhkov) {
    // dU is a sign that flips where c0(s, v) = k; integrate dc1_du on each side.
    auto piece = [&](double a, double b) {
      if (a == b) return 0.0;
      const double sign = entropy.dU(c0(0.5 * (a + b), v));
      return sign * numerics::adaptive_simpson([&](double s) { return dc1_du(s, v); }, a, b);
    };
    const double a = std::min(lo, u), b = std::max(lo, u);
    if (c0(a, v) < entropy.k && c0(b, v) > entropy.k) {
      const double kink = u_of_w(entropy.k, v);
      return piece(lo, kink) + piece(kink, u);
    }
    return piece(lo, u);
  }
  return numerics::adaptive_simpson(integrand, lo, u);
}

double CouplingModel::kruzhkov_entropy_flux(double w, double v, double k) const {
  if (w == k) return 0.0;
  return sgn(w - k) * (w_flux(w, v) - w_flux(k, v));
}

std::vector<double> CouplingModel::flux_critical_points_u(double v, double lo, double hi) const {
  constexpr int samples = 401;
  std::vector<double> nodes;
  nodes.reserve(samples + fluxes_.minus.critical_points.size() + fluxes_.plus.critical_points.size());
  for (int i = 0; i < samples; ++i) nodes.push_back(std::lerp(lo, hi, static_cast<double>(i) / (samples - 1)));
  for (double c : fluxes_.minus.critical_points) nodes.push_back(transmission_.minus.theta(c));
  for (double c : fluxes_.plus.critical_points) nodes.push_back(transmission_.plus.theta(c));
  std::erase_if(nodes, [&](double x) { return x < lo || x > hi; });
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto slope = [&](double u) { return dc1_du(u, v); };
  std::vector<double> roots;
  double prev_x = 0.0, prev_s = 0.0;
  bool have_prev = false;
  double pending_zero = std::numeric_limits<double>::quiet_NaN();
  for (double x : nodes) {
    const double s = slope(x);
    if (s == 0.0) {
      if (std::isnan(pending_zero)) pending_zero = x;
      continue;
    }
    if (have_prev && (s > 0.0) != (prev_s > 0.0)) {
      roots.push_back(std::isnan(pending_zero) ? numerics::bisect_sign_change(slope, prev_x, x)
                                               : pending_zero);
    }
    pending_zero = std::numeric_limits<double>::quiet_NaN();
    prev_x = x;
    prev_s = s;
    have_prev = true;
  }
  return roots;
}

}  // namespace couplefv

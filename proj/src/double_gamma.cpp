#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>

#include "adaptive_quad.h"
#include "gmc/errors.h"
#include "gmc/specfun.h"

namespace gmc::specfun {

namespace {

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

// e^{-40} is below double epsilon relative to the leading tail terms.
constexpr double kTailDecay = 40.0;
// Floor set by rounding in the integrand just above the series switch.
constexpr double kAbsTol = 1e-14;
constexpr double kAcceptError = 1e-11;

double expint1(double z) { return boost::math::expint(1, z); }

}  // namespace

DoubleGamma::DoubleGamma(double gamma, double quad_rel_tol, double series_switch)
    : gamma_(gamma),
      half_gamma_(0.5 * gamma),
      q_(0.5 * gamma + 2.0 / gamma),
      quad_rel_tol_(quad_rel_tol),
      series_switch_(series_switch),
      cut_(kTailDecay / (0.5 * gamma)) {
  if (!(gamma > 0.0 && gamma <= 2.0)) {
    throw DomainError("DoubleGamma: gamma must lie in (0, 2]");
  }
  if (!(quad_rel_tol > 0.0) || !(series_switch > 0.0) || series_switch >= cut_) {
    throw DomainError("DoubleGamma: invalid quadrature configuration");
  }
}

double DoubleGamma::log_shift_small(double x) const {
  const double gx = half_gamma_ * x;
  return -0.5 * kLogTwoPi + log_gamma(gx).log_abs +
         (0.5 - gx) * std::log(half_gamma_);
}

double DoubleGamma::log_shift_large(double x) const {
  const double gx = x / half_gamma_;
  return -0.5 * kLogTwoPi + log_gamma(gx).log_abs +
         (gx - 0.5) * std::log(half_gamma_);
}

double DoubleGamma::window_integral(double x) const {
  const double b = half_gamma_;
  const double inv_b = 1.0 / b;
  const double half_q = 0.5 * q_;
  const double d = half_q - x;
  const double d2 = d * d;
  const double b2 = b * b;
  const double s2 = b2 + 1.0 / b2;
  const double s4 = b2 * b2 + 1.0 / (b2 * b2);

  // Taylor coefficients of the integrand in t, written in d = Q/2 - x.
  const double c0 = d * d2 / 6.0 + d2 / 2.0 - d * s2 / 24.0;
  const double c1 = d2 * d2 / 24.0 - d2 * (s2 / 48.0 + 0.25);
  const double c2 = d2 * d2 * d / 120.0 - d2 * d * s2 / 144.0 + d2 / 12.0 +
                    d * (7.0 * s4 / 5760.0 + 1.0 / 576.0);
  const double c3 = d2 * d2 * d2 / 720.0 - d2 * d2 * s2 / 576.0 +
                    d2 * (7.0 * s4 / 11520.0 - 23.0 / 1152.0);
  const double s = series_switch_;
  const double head = s * (c0 + s * (c1 / 2.0 + s * (c2 / 3.0 + s * c3 / 4.0)));

  auto integrand = [=](double t) {
    double numer;
    if (std::abs(d * t) < 1.0) {
      numer = std::exp(-half_q * t) * std::expm1(d * t);
    } else {
      numer = std::exp(-x * t) - std::exp(-half_q * t);
    }
    const double denom = std::expm1(-b * t) * std::expm1(-inv_b * t);
    const double bracket = numer / denom - 0.5 * d2 * std::exp(-t) - d / t;
    return bracket / t;
  };

  const detail::QuadResult body_quad =
      detail::adaptive_gk(integrand, s, cut_, quad_rel_tol_, kAbsTol);
  const double body = body_quad.value;
  if (!std::isfinite(body) || body_quad.error > kAcceptError) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "double gamma quadrature did not converge at x = " << x
        << " (error estimate " << body_quad.error << ")";
    throw ConvergenceError(msg.str());
  }

  const double big_t = cut_;
  const double tail = expint1(x * big_t) - expint1(half_q * big_t) -
                      0.5 * d2 * expint1(big_t) - d / big_t;
  return head + body + tail;
}

double DoubleGamma::log(double x) const {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "log_double_gamma: argument must be positive, got " << x;
    throw DomainError(msg.str());
  }
  // ln G(y + 2/gamma) = ln G(y) - ln[G(y)/G(y + 2/gamma)]
  const double period = 1.0 / half_gamma_;
  double shifts = 0.0;
  while (x > q_) {
    x -= period;
    shifts += log_shift_large(x);
  }
  return window_integral(x) - shifts;
}

double DoubleGamma::operator()(double x) const { return std::exp(log(x)); }

double log_double_gamma(const DoubleGamma& eval, double x) { return eval.log(x); }

double log_barnes_g(double x) {
  if (!(x > 0.0)) {
    throw DomainError("barnes_g: argument must be positive");
  }
  static const DoubleGamma critical(2.0);
  return (0.5 * x - 0.5) * kLogTwoPi - critical.log(x);
}

double barnes_g(double x) { return std::exp(log_barnes_g(x)); }

double beta22_log_moment(const Beta22Params& params, double p,
                         const DoubleGamma& eval) {
  const double h = 0.5 * params.gamma;
  const double b0 = params.b0;
  const double b1 = params.b1;
  const double b2 = params.b2;
  const double pb0 = p + b0;
  const double b12 = b1 + b2;
  const std::array<double, 8> args = {
      h * pb0,        h * (pb0 + b12), h * (b0 + b1),  h * (b0 + b2),
      h * b0,         h * (b0 + b12),  h * (pb0 + b1), h * (pb0 + b2)};
  for (double v : args) {
    if (!(v > 0.0)) {
      throw DomainError("beta22_log_moment: nonpositive double gamma argument");
    }
  }
  // Paired sums keep p = 0 exactly zero and b1 <-> b2 exactly symmetric.
  const double numer = (eval.log(args[0]) + eval.log(args[1])) +
                       (eval.log(args[2]) + eval.log(args[3]));
  const double denom = (eval.log(args[4]) + eval.log(args[5])) +
                       (eval.log(args[6]) + eval.log(args[7]));
  return numer - denom;
}

double beta22_log_moment(const Beta22Params& params, double p) {
  if (!(params.gamma > 0.0 && params.gamma < 2.0)) {
    throw DomainError("beta22_log_moment: gamma must lie in (0, 2)");
  }
  return beta22_log_moment(params, p, DoubleGamma(params.gamma));
}

}  // namespace gmc::specfun

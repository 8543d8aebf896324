#include <cmath>
#include <numbers>
#include <sstream>

#include "gmc/errors.h"
#include "gmc/specfun.h"

namespace gmc::specfun {

namespace {

// sin(pi x) with the argument reduced first, so that exact integers give 0.
double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(std::numbers::pi * r);
}

[[noreturn]] void throw_pole(double x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "Gamma pole at x = " << x;
  throw PoleError(msg.str());
}

}  // namespace

bool near_nonpositive_integer(double x, double tol) {
  if (x > tol) {
    return false;
  }
  return std::abs(x - std::round(x)) <= tol;
}

double gamma_fn(double x) {
  if (std::isnan(x)) {
    throw DomainError("gamma_fn: NaN argument");
  }
  if (near_nonpositive_integer(x)) {
    throw_pole(x);
  }
  if (x > 0.0) {
    return std::tgamma(x);
  }
  return std::numbers::pi / (sin_pi(x) * std::tgamma(1.0 - x));
}

SignedLog log_gamma(double x) {
  if (std::isnan(x)) {
    throw DomainError("log_gamma: NaN argument");
  }
  if (near_nonpositive_integer(x)) {
    throw_pole(x);
  }
  int sign = 1;
  if (x > 0.0) {
    const double value = ::lgamma_r(x, &sign);
    return {value, 1};
  }
  const double s = sin_pi(x);
  const double lg = ::lgamma_r(1.0 - x, &sign);
  return {std::log(std::numbers::pi) - std::log(std::abs(s)) - lg,
          s > 0.0 ? 1 : -1};
}

double rgamma(double x) {
  if (near_nonpositive_integer(x)) {
    return 0.0;
  }
  const SignedLog lg = log_gamma(x);
  return lg.sign * std::exp(-lg.log_abs);
}

}  // namespace gmc::specfun

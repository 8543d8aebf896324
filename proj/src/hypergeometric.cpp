#include <cmath>
#include <sstream>

#include "gmc/errors.h"
#include "gmc/specfun.h"

namespace gmc::specfun {

namespace {

constexpr double kSeriesRelTol = 1e-16;
constexpr long kSeriesMaxTerms = 100000;
// Beyond this |t| the Pfaff argument t/(t-1) exceeds 0.999.
constexpr double kInverseArgumentCut = -1e3;
constexpr double kIntegerGuard = 1e-9;

double near_integer_distance(double x) { return std::abs(x - std::round(x)); }

// Defining series of F(a, b, c; z), |z| < 1.
double gauss_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (long n = 0; n < kSeriesMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    const double ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) {
      return sum;
    }
    if (std::abs(term) <= kSeriesRelTol * std::abs(sum) && std::abs(ratio) < 1.0) {
      return sum;
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "hypergeometric series did not converge in " << kSeriesMaxTerms
      << " terms (a=" << a << ", b=" << b << ", c=" << c << ", z=" << z << ")";
  throw ConvergenceError(msg.str());
}

// sign * exp(log_abs) of Gamma(n1) Gamma(n2) / (Gamma(d1) Gamma(d2)).
// Numerator poles throw; denominator poles give an exact zero.
double gamma_ratio(double n1, double n2, double d1, double d2) {
  const SignedLog g1 = log_gamma(n1);
  const SignedLog g2 = log_gamma(n2);
  if (near_nonpositive_integer(d1) || near_nonpositive_integer(d2)) {
    return 0.0;
  }
  const SignedLog h1 = log_gamma(d1);
  const SignedLog h2 = log_gamma(d2);
  const int sign = g1.sign * g2.sign * h1.sign * h2.sign;
  return sign * std::exp((g1.log_abs + g2.log_abs) - (h1.log_abs + h2.log_abs));
}

}  // namespace

InverseExpansion inverse_expansion(const HypTriple& params) {
  const double a = params.a;
  const double b = params.b;
  const double c = params.c;
  return {gamma_ratio(c, b - a, b, c - a), gamma_ratio(c, a - b, a, c - b)};
}

double inverse_series_a(const HypTriple& params, double t) {
  return gauss_series(params.a, params.a - params.c + 1.0, params.a - params.b + 1.0,
                      1.0 / t);
}

double inverse_series_b(const HypTriple& params, double t) {
  return gauss_series(params.b, params.b - params.c + 1.0, params.b - params.a + 1.0,
                      1.0 / t);
}

namespace {

// F(A,B,C;t) for t << -1 through the expansion in 1/t.
double inverse_argument(const HypTriple& params, double t) {
  const InverseExpansion k = inverse_expansion(params);
  const double mt = -t;
  double value = 0.0;
  if (k.k1 != 0.0) {
    value += k.k1 * std::pow(mt, -params.a) * inverse_series_a(params, t);
  }
  if (k.k2 != 0.0) {
    value += k.k2 * std::pow(mt, -params.b) * inverse_series_b(params, t);
  }
  return value;
}

}  // namespace

double hyp2f1_negative(const HypTriple& params, double t) {
  const double a = params.a;
  const double b = params.b;
  const double c = params.c;
  if (near_nonpositive_integer(c)) {
    throw DegenerateCError("hyp2f1_negative: C is a nonpositive integer");
  }
  if (!(t <= 0.0)) {
    throw DomainError("hyp2f1_negative: requires t <= 0");
  }
  if (t == 0.0) {
    return 1.0;
  }
  if (t > -0.5) {
    return gauss_series(a, b, c, t);
  }
  if (t < kInverseArgumentCut && near_integer_distance(a - b) > kIntegerGuard) {
    return inverse_argument(params, t);
  }
  // Pfaff: both forms share z = t/(t-1) in [1/3, 1); take the one whose
  // terms decay faster near z = 1.
  const double z = t / (t - 1.0);
  const double one_minus_t = 1.0 - t;
  if (a - b <= b - a) {
    return std::pow(one_minus_t, -a) * gauss_series(a, c - b, c, z);
  }
  return std::pow(one_minus_t, -b) * gauss_series(b, c - a, c, z);
}

ConnectionResult connection_coeffs(const HypTriple& params, double d1,
                                   double d2) {
  const double a = params.a;
  const double b = params.b;
  const double c = params.c;
  ConnectionResult out;
  if (d1 != 0.0) {
    const double m11 = gamma_ratio(1.0 - c, a - b + 1.0, a - c + 1.0, 1.0 - b);
    const double m21 = gamma_ratio(c - 1.0, a - b + 1.0, a, c - b);
    out.c1 += m11 * d1;
    out.c2 += m21 * d1;
  }
  if (d2 != 0.0) {
    const double m12 = gamma_ratio(1.0 - c, b - a + 1.0, b - c + 1.0, 1.0 - a);
    const double m22 = gamma_ratio(c - 1.0, b - a + 1.0, b, c - a);
    out.c1 += m12 * d2;
    out.c2 += m22 * d2;
  }
  return out;
}

}  // namespace gmc::specfun

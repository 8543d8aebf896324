#include "gmc/exactlaw.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gmc/errors.h"

namespace gmc::exactlaw {

namespace {

using specfun::DoubleGamma;
using specfun::HypTriple;
using specfun::SignedLog;

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);
const double kLogTwo = std::log(2.0);
constexpr double kGenericGuard = 1e-9;
// Beyond this the prediction comes from the expansion at infinity alone.
constexpr double kFarField = -1e3;
// The 1/t series is used below this point when the |t|-basis cancels badly.
constexpr double kInverseSeriesStart = -2.0;
constexpr double kMaxCancellation = 1e6;

// Running signed product of Gamma values, kept as a log-magnitude and sign.
struct GammaProduct {
  double log_abs = 0.0;
  int sign = 1;

  void mul(double x) {
    const SignedLog g = specfun::log_gamma(x);
    log_abs += g.log_abs;
    sign *= g.sign;
  }
  void div(double x) {
    const SignedLog g = specfun::log_gamma(x);
    log_abs -= g.log_abs;
    sign *= g.sign;
  }
  double value() const { return sign * std::exp(log_abs); }
};

std::string describe(const GmcParams& params) {
  std::ostringstream out;
  out.precision(17);
  out << "(gamma=" << params.gamma << ", p=" << params.p << ", a=" << params.a
      << ", b=" << params.b << ")";
  return out.str();
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0)) {
    throw DomainError("gamma must lie in (0, 2)");
  }
}

void require_bounds(const GmcParams& params, const char* what) {
  require_gamma(params.gamma);
  if (!bounds_check(params)) {
    throw BoundsError(std::string(what) + ": parameters violate the moment bounds " +
                      describe(params));
  }
}

double integer_distance(double x) { return std::abs(x - std::round(x)); }

}  // namespace

double insertion_exponent(double gamma, ObservableKind kind) {
  return kind == ObservableKind::U_gamma_sq_over_4 ? 0.25 * gamma * gamma : 1.0;
}

double p_upper_bound(double gamma, double a, double b) {
  const double k = 4.0 / (gamma * gamma);
  return std::min({k, 1.0 + k * (1.0 + a), 1.0 + k * (1.0 + b)});
}

bool bounds_check(const GmcParams& params) {
  const double g = params.gamma;
  if (!(g > 0.0 && g < 2.0)) {
    return false;
  }
  const double floor = -0.25 * g * g - 1.0;
  if (!(params.a > floor) || !(params.b > floor)) {
    return false;
  }
  return params.p < p_upper_bound(g, params.a, params.b);
}

MomentBreakdown exact_moment_breakdown(const GmcParams& params,
                                       const DoubleGamma& eval) {
  require_bounds(params, "exact_moment");
  const double g = params.gamma;
  const double p = params.p;
  const double h = 0.5 * g;
  const double k = 2.0 / g;
  const double ua = k * (params.a + 1.0);
  const double ub = k * (params.b + 1.0);
  const double uab = k * (params.a + params.b + 2.0);

  // At p = 0 each numerator argument equals its denominator partner bit for
  // bit, and both groups are summed in the same order.
  const double numer = (eval.log(ua - (p - 1.0) * h) + eval.log(ub - (p - 1.0) * h)) +
                       (eval.log(uab - (p - 2.0) * h) + eval.log(k - p * h));
  const double denom = (eval.log(ua + h) + eval.log(ub + h)) +
                       (eval.log(uab - (2.0 * p - 2.0) * h) + eval.log(k));

  MomentBreakdown out;
  out.log_two_pi = p * kLogTwoPi;
  out.log_gamma_power = -p * 0.25 * g * g * std::log(h);
  out.log_euler_gamma = -p * specfun::log_gamma(1.0 - 0.25 * g * g).log_abs;
  out.log_double_gamma = numer - denom;
  out.log_value = ((out.log_two_pi + out.log_gamma_power) + out.log_euler_gamma) +
                  out.log_double_gamma;
  return out;
}

MomentBreakdown exact_moment_breakdown(const GmcParams& params) {
  require_gamma(params.gamma);
  return exact_moment_breakdown(params, DoubleGamma(params.gamma));
}

double exact_log_moment(const GmcParams& params, const DoubleGamma& eval) {
  return exact_moment_breakdown(params, eval).log_value;
}

double exact_log_moment(const GmcParams& params) {
  return exact_moment_breakdown(params).log_value;
}

double exact_moment(const GmcParams& params, const DoubleGamma& eval) {
  return std::exp(exact_log_moment(params, eval));
}

double exact_moment(const GmcParams& params) {
  return std::exp(exact_log_moment(params));
}

double selberg_product(double gamma, int p, double a, double b) {
  require_gamma(gamma);
  if (p < 0) {
    throw DomainError("selberg_product: p must be a nonnegative integer");
  }
  if (!(a > -1.0) || !(b > -1.0)) {
    throw DomainError("selberg_product: requires a, b > -1");
  }
  require_bounds({gamma, static_cast<double>(p), a, b}, "selberg_product");
  const double g = 0.25 * gamma * gamma;
  GammaProduct prod;
  for (int j = 1; j <= p; ++j) {
    const double jm1 = j - 1;
    prod.mul(1.0 + a - jm1 * g);
    prod.mul(1.0 + b - jm1 * g);
    prod.mul(1.0 - j * g);
    prod.div(2.0 + a + b - (p + j - 2) * g);
    prod.div(1.0 - g);
  }
  return prod.value();
}

double log_c_of_p(double gamma, double p) {
  require_gamma(gamma);
  const double h = 0.5 * gamma;
  const double k = 2.0 / gamma;
  if (!(k - p * h > 0.0)) {
    throw DomainError("c_of_p: requires 2/gamma - p gamma/2 > 0");
  }
  const DoubleGamma eval(gamma);
  const double g = 0.25 * gamma * gamma;
  return p * kLogTwoPi - p * specfun::log_gamma(1.0 - g).log_abs +
         p * g * std::log(k) + (eval.log(k - p * h) - eval.log(k));
}

double c_of_p(double gamma, double p) { return std::exp(log_c_of_p(gamma, p)); }

GmcParams shifted_params(const GmcParams& params, ShiftKind kind) {
  GmcParams out = params;
  switch (kind) {
    case ShiftKind::a_plus_gamma2_over_4:
      out.a += 0.25 * params.gamma * params.gamma;
      break;
    case ShiftKind::a_plus_one:
      out.a += 1.0;
      break;
    case ShiftKind::p_minus_one_to_p:
      out.p -= 1.0;
      break;
  }
  return out;
}

double shift_ratio(const GmcParams& params, ShiftKind kind) {
  require_bounds(params, "shift_ratio");
  require_bounds(shifted_params(params, kind), "shift_ratio");
  const double p = params.p;
  const double a = params.a;
  const double b = params.b;
  const double g = 0.25 * params.gamma * params.gamma;
  GammaProduct prod;
  switch (kind) {
    case ShiftKind::a_plus_gamma2_over_4:
      prod.mul(1.0 + a + g);
      prod.mul(2.0 + a + b - (2.0 * p - 2.0) * g);
      prod.div(1.0 + a - (p - 1.0) * g);
      prod.div(2.0 + a + b - (p - 2.0) * g);
      break;
    case ShiftKind::a_plus_one: {
      const double k = 1.0 / g;
      prod.mul(k * (1.0 + a) + 1.0);
      prod.mul(k * (2.0 + a + b) - (2.0 * p - 2.0));
      prod.div(k * (1.0 + a) - (p - 1.0));
      prod.div(k * (2.0 + a + b) - (p - 2.0));
      break;
    }
    case ShiftKind::p_minus_one_to_p:
      prod.mul(1.0 - p * g);
      prod.div(1.0 - g);
      prod.mul(1.0 + a - (p - 1.0) * g);
      prod.mul(1.0 + b - (p - 1.0) * g);
      prod.mul(2.0 + a + b - (p - 2.0) * g);
      prod.div(2.0 + a + b - (2.0 * p - 3.0) * g);
      prod.div(2.0 + a + b - (2.0 * p - 2.0) * g);
      break;
  }
  return prod.value();
}

double log_reflection_boundary_1d(double gamma, double alpha) {
  require_gamma(gamma);
  const double h = 0.5 * gamma;
  const double q = h + 2.0 / gamma;
  if (!(alpha > h && alpha < q)) {
    throw DomainError("reflection_boundary_1d: alpha must lie in (gamma/2, Q)");
  }
  const DoubleGamma eval(gamma);
  const double d = q - alpha;
  const double power = 2.0 * d / gamma;
  return (power - 0.5) * kLogTwoPi + (h * d - 0.5) * std::log(2.0 / gamma) -
         std::log(d) - power * specfun::log_gamma(1.0 - h * h).log_abs +
         (eval.log(alpha - h) - eval.log(d));
}

double reflection_boundary_1d(double gamma, double alpha) {
  return std::exp(log_reflection_boundary_1d(gamma, alpha));
}

double reflection_bulk_2d(double gamma, double alpha) {
  require_gamma(gamma);
  const double h = 0.5 * gamma;
  const double q = h + 2.0 / gamma;
  if (!(alpha > h && alpha < q)) {
    throw DomainError("reflection_bulk_2d: alpha must lie in (gamma/2, Q)");
  }
  const double d = q - alpha;
  const double power = 2.0 * d / gamma;
  const double g = h * h;
  GammaProduct prod;
  prod.mul(-h * d);
  prod.div(h * d);
  prod.div(power);
  const double log_abs = std::log(h / d) +
                         power * (std::log(std::numbers::pi) + specfun::log_gamma(g).log_abs) -
                         power * specfun::log_gamma(1.0 - g).log_abs + prod.log_abs;
  return -prod.sign * std::exp(log_abs);
}

LawFactors law_factors(const GmcParams& params) {
  const double g = params.gamma;
  const double k = 4.0 / (g * g);
  const double a = params.a;
  const double b = params.b;
  LawFactors f;
  f.x1 = {g, 1.0 + k * (1.0 + a), 0.5 * k * (b - a), 0.5 * k * (b - a)};
  f.x2 = {g, 1.0 + 0.5 * k * (2.0 + a + b), 0.5, 0.5 * k};
  const double c = 0.5 + 0.5 * k * (1.0 + a + b);
  f.x3 = {g, 1.0 + k, c, c};
  return f;
}

double law_decomposition_log_moment(const GmcParams& params, const DoubleGamma& eval) {
  require_bounds(params, "law_decomposition_log_moment");
  const double g = params.gamma;
  const double p = params.p;
  const double g4 = 0.25 * g * g;
  const double log_const =
      kLogTwoPi - (3.0 * (1.0 + g4) + 2.0 * (params.a + params.b)) * kLogTwo;
  const double log_l = 0.5 * p * p * g * g * kLogTwo;
  const double log_y = specfun::log_gamma(1.0 - p * g4).log_abs -
                       p * specfun::log_gamma(1.0 - g4).log_abs;
  const LawFactors f = law_factors(params);
  // The X factors are inverse beta_{2,2} variables: E[X^p] = E[beta^{-p}].
  const double log_x = specfun::beta22_log_moment(f.x1, -p, eval) +
                       specfun::beta22_log_moment(f.x2, -p, eval) +
                       specfun::beta22_log_moment(f.x3, -p, eval);
  return p * log_const + log_l + log_y + log_x;
}

double law_decomposition_log_moment(const GmcParams& params) {
  require_gamma(params.gamma);
  return law_decomposition_log_moment(params, DoubleGamma(params.gamma));
}

double derivative_martingale_moment(double p) {
  if (!(p < 1.0)) {
    throw DomainError("derivative_martingale_moment: requires p < 1");
  }
  static const DoubleGamma critical(2.0);
  const double log_value =
      p * kLogTwoPi +
      (critical.log(1.0 - p) + 2.0 * critical.log(2.0 - p) + critical.log(4.0 - p)) -
      (2.0 * critical.log(2.0) + critical.log(4.0 - 2.0 * p));
  return std::exp(log_value);
}

double derivative_martingale_moment_barnes(double p) {
  if (!(p < 1.0)) {
    throw DomainError("derivative_martingale_moment: requires p < 1");
  }
  const double log_value =
      specfun::log_barnes_g(4.0 - 2.0 * p) -
      (specfun::log_barnes_g(1.0 - p) + 2.0 * specfun::log_barnes_g(2.0 - p) +
       specfun::log_barnes_g(4.0 - p));
  return std::exp(log_value);
}

HypTriple hyp_triple(const GmcParams& params, ObservableKind kind) {
  const double p = params.p;
  const double a = params.a;
  const double b = params.b;
  const double g = 0.25 * params.gamma * params.gamma;
  if (kind == ObservableKind::U_gamma_sq_over_4) {
    return {-p * g, -(a + b + 1.0) - (2.0 - p) * g, -a - g};
  }
  const double k = 1.0 / g;
  return {-p, -k * (a + b + 2.0) + p - 1.0, -k * (a + 1.0)};
}

GmcParams insertion_shifted(const GmcParams& params, ObservableKind kind) {
  GmcParams out = params;
  out.a += insertion_exponent(params.gamma, kind);
  return out;
}

double predict_observable(const GmcParams& params, ObservableKind kind, double t) {
  if (!(t < 0.0)) {
    throw DomainError("predict_observable: requires t < 0");
  }
  require_bounds(params, "predict_observable");
  require_bounds(insertion_shifted(params, kind), "predict_observable");
  const HypTriple h = hyp_triple(params, kind);
  if (integer_distance(h.c) <= kGenericGuard || integer_distance(h.a - h.b) <= kGenericGuard) {
    throw DomainError(
        "predict_observable: C or A-B is an integer; non-generic parameters " +
        describe(params));
  }
  const double d1 = exact_moment(params);
  // Expansion at infinity with D2 = 0: D1 |t|^{-A} F(A, A-C+1, A-B+1; 1/t).
  auto far_basis = [&] { return d1 * std::pow(-t, -h.a) * specfun::inverse_series_a(h, t); };
  if (t < kFarField) {
    return far_basis();
  }
  const specfun::ConnectionResult c = specfun::connection_coeffs(h, d1, 0.0);
  const HypTriple second{1.0 + h.a - h.c, 1.0 + h.b - h.c, 2.0 - h.c};
  const double first_term = c.c1 * specfun::hyp2f1_negative(h, t);
  const double second_term =
      c.c2 == 0.0 ? 0.0 : c.c2 * std::pow(-t, 1.0 - h.c) * specfun::hyp2f1_negative(second, t);
  const double value = first_term + second_term;
  // Both terms grow like |t|^{-B} while U decays like |t|^{-A}; when that
  // cancellation eats more than kMaxCancellation, switch bases.
  if (t < kInverseSeriesStart &&
      std::fabs(first_term) + std::fabs(second_term) > kMaxCancellation * std::fabs(value)) {
    return far_basis();
  }
  return value;
}

}  // namespace gmc::exactlaw

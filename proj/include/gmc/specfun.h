#pragma once

// Scalar special functions: Euler Gamma, Gauss 2F1 on the negative axis,
// the double gamma function Gamma_{gamma/2}, Barnes G, beta_{2,2} moments and
// the 2x2 hypergeometric connection matrix.
//
// Everything here is a pure function of its arguments. DoubleGamma is
// immutable after construction and may be shared between threads.

namespace gmc::specfun {

/// Absolute tolerance used to decide that an argument sits on a pole.
inline constexpr double kPoleTolerance = 1e-12;

/// True when x lies within `tol` of a nonpositive integer.
bool near_nonpositive_integer(double x, double tol = kPoleTolerance);

/// Euler Gamma. Negative arguments go through the reflection formula.
/// Throws PoleError on nonpositive integers.
double gamma_fn(double x);

/// ln|Gamma(x)| together with the sign of Gamma(x).
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};

/// Thread-safe signed log-Gamma. Throws PoleError on nonpositive integers.
SignedLog log_gamma(double x);

/// 1/Gamma(x); exactly zero at the poles of Gamma.
double rgamma(double x);

/// Parameters (A, B, C) of a Gauss hypergeometric function.
struct HypTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
};

/// F(A, B, C; t) for t <= 0.
///
/// t in (-0.5, 0]: the defining series. t <= -0.5: the Pfaff transform
/// (1-t)^{-A} F(A, C-B, C; t/(t-1)). Far out on the axis (t < -1e3), where the
/// Pfaff argument is too close to 1 for the series to converge within the term
/// cap, the 1/t connection formula is used when A-B is not an integer.
///
/// Throws DegenerateCError, DomainError (t > 0) or ConvergenceError.
double hyp2f1_negative(const HypTriple& params, double t);

/// Coefficients of the expansion at infinity, valid for t < 0 when A - B is
/// not an integer:
///   F(A,B,C;t) = k1 |t|^{-A} F(A, A-C+1, A-B+1; 1/t)
///              + k2 |t|^{-B} F(B, B-C+1, B-A+1; 1/t).
struct InverseExpansion {
  double k1 = 0.0;
  double k2 = 0.0;
};

InverseExpansion inverse_expansion(const HypTriple& params);

/// The two 1/t series above, summed directly (requires |t| > 1).
double inverse_series_a(const HypTriple& params, double t);
double inverse_series_b(const HypTriple& params, double t);

/// Evaluator for ln Gamma_{gamma/2}(x) at fixed gamma in (0, 2].
///
/// Inside the base window (0, Q] the defining integral is evaluated directly:
/// a Taylor expansion of the integrand on [0, series_switch], adaptive
/// Gauss-Kronrod panels up to a cut T where the denominator is 1 to machine
/// precision, and closed-form exponential-integral tails beyond T. Larger
/// arguments are brought into the window with the 2/gamma shift equation.
class DoubleGamma {
 public:
  explicit DoubleGamma(double gamma, double quad_rel_tol = 1e-13,
                       double series_switch = 1e-3);

  double gamma() const { return gamma_; }
  double q() const { return q_; }
  double quad_rel_tol() const { return quad_rel_tol_; }
  double series_switch() const { return series_switch_; }

  /// ln Gamma_{gamma/2}(x); DomainError for x <= 0.
  double log(double x) const;

  /// Gamma_{gamma/2}(x).
  double operator()(double x) const;

  /// ln of Gamma_{gamma/2}(x) / Gamma_{gamma/2}(x + gamma/2), from Euler Gamma.
  double log_shift_small(double x) const;
  /// ln of Gamma_{gamma/2}(x) / Gamma_{gamma/2}(x + 2/gamma), from Euler Gamma.
  double log_shift_large(double x) const;

 private:
  double window_integral(double x) const;

  double gamma_;
  double half_gamma_;  // gamma/2, the small period
  double q_;
  double quad_rel_tol_;
  double series_switch_;
  double cut_;  // T
};

/// Free-function form of DoubleGamma::log.
double log_double_gamma(const DoubleGamma& eval, double x);

/// Barnes G function for x > 0, via Gamma_1(x) = (2 pi)^{x/2 - 1/2} / G(x).
double barnes_g(double x);
double log_barnes_g(double x);

/// Parameters of beta_{2,2}(1, 4/gamma^2; b0, b1, b2).
struct Beta22Params {
  double gamma = 1.0;
  double b0 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// ln E[beta_{2,2}^p] as a ratio of eight double gamma values.
/// DomainError when any double gamma argument is nonpositive.
double beta22_log_moment(const Beta22Params& params, double p);
double beta22_log_moment(const Beta22Params& params, double p,
                         const DoubleGamma& eval);

/// Coefficients (C1, C2) of the |t|-basis from the coefficients (D1, D2) of
/// the 1/|t|-basis of the same hypergeometric equation.
struct ConnectionResult {
  double c1 = 0.0;
  double c2 = 0.0;
};

ConnectionResult connection_coeffs(const HypTriple& params, double d1,
                                   double d2);

}  // namespace gmc::specfun

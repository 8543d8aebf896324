#pragma once

// Closed-form quantities for GMC on [0,1] with insertions x^a (1-x)^b:
// the exact moment M(gamma, p, a, b), the Selberg product at integer p, the
// shift-equation ratios, C(p), reflection coefficients, the product-of-laws
// decomposition, derivative-martingale moments and the prediction of the
// auxiliary observables U(t), U~(t) in the hypergeometric basis around 0.
//
// Products of Gamma-type factors are accumulated as log-sums and only
// exponentiated at the end.

#include "gmc/specfun.h"

namespace gmc::exactlaw {

struct GmcParams {
  double gamma = 1.0;
  double p = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Insertion (x - t)^chi with chi = gamma^2/4 (U) or chi = 1 (U~).
enum class ObservableKind { U_gamma_sq_over_4, U_tilde };

double insertion_exponent(double gamma, ObservableKind kind);

/// min(4/gamma^2, 1 + 4/gamma^2 (1+a), 1 + 4/gamma^2 (1+b)).
double p_upper_bound(double gamma, double a, double b);

/// All three existence bounds, strictly. False for gamma outside (0,2).
bool bounds_check(const GmcParams& params);

/// Logarithmic pieces of the exact moment. log_value is their sum.
struct MomentBreakdown {
  double log_two_pi = 0.0;        // p ln(2 pi)
  double log_gamma_power = 0.0;   // -p gamma^2/4 ln(gamma/2)
  double log_euler_gamma = 0.0;   // -p ln Gamma(1 - gamma^2/4)
  double log_double_gamma = 0.0;  // ratio of eight Gamma_{gamma/2} values
  double log_value = 0.0;
};

MomentBreakdown exact_moment_breakdown(const GmcParams& params,
                                       const specfun::DoubleGamma& eval);
MomentBreakdown exact_moment_breakdown(const GmcParams& params);

/// ln M(gamma, p, a, b). BoundsError outside the bounds, DomainError if a
/// double gamma argument is nonpositive.
double exact_log_moment(const GmcParams& params);
double exact_log_moment(const GmcParams& params, const specfun::DoubleGamma& eval);
double exact_moment(const GmcParams& params);
double exact_moment(const GmcParams& params, const specfun::DoubleGamma& eval);

/// Integer moment as the Selberg product over j = 1..p.
double selberg_product(double gamma, int p, double a, double b);

/// C(p) and its logarithm; DomainError unless 2/gamma - p gamma/2 > 0.
double log_c_of_p(double gamma, double p);
double c_of_p(double gamma, double p);

enum class ShiftKind { a_plus_gamma2_over_4, a_plus_one, p_minus_one_to_p };

/// Closed-form ratio of a shift equation:
///   a_plus_gamma2_over_4: M(p, a + gamma^2/4, b) / M(p, a, b)
///   a_plus_one:           M(p, a + 1, b) / M(p, a, b)
///   p_minus_one_to_p:     M(p, a, b) / M(p - 1, a, b)
/// BoundsError unless both related parameter points are valid.
double shift_ratio(const GmcParams& params, ShiftKind kind);

/// Parameter point on the other side of a shift.
GmcParams shifted_params(const GmcParams& params, ShiftKind kind);

/// Boundary reflection coefficient in dimension one, alpha in (gamma/2, Q).
double log_reflection_boundary_1d(double gamma, double alpha);
double reflection_boundary_1d(double gamma, double alpha);

/// Bulk reflection coefficient in dimension two, alpha in (gamma/2, Q).
double reflection_bulk_2d(double gamma, double alpha);

/// ln of the moment assembled from the product-of-laws decomposition
/// c L Y X1 X2 X3.
double law_decomposition_log_moment(const GmcParams& params);
double law_decomposition_log_moment(const GmcParams& params,
                                    const specfun::DoubleGamma& eval);

/// Parameters of the three inverse beta_{2,2} factors X1, X2, X3.
struct LawFactors {
  specfun::Beta22Params x1, x2, x3;
};
LawFactors law_factors(const GmcParams& params);

/// E[(2M')^p] for p < 1, through Gamma_1 and through Barnes G.
double derivative_martingale_moment(double p);
double derivative_martingale_moment_barnes(double p);

/// (A, B, C) of the hypergeometric equation satisfied by U or U~.
specfun::HypTriple hyp_triple(const GmcParams& params, ObservableKind kind);

/// Moment parameters at t = 0: (p, a + gamma^2/4, b) for U, (p, a + 1, b)
/// for U~.
GmcParams insertion_shifted(const GmcParams& params, ObservableKind kind);

/// U(t) or U~(t) for t < 0 rebuilt from D1 = M(gamma,p,a,b), D2 = 0 through
/// the connection matrix: C1 F(A,B,C,t) + C2 |t|^{1-C} F(1+A-C,1+B-C,2-C,t).
/// DomainError when C or A - B is within 1e-9 of an integer.
double predict_observable(const GmcParams& params, ObservableKind kind, double t);

}  // namespace gmc::exactlaw

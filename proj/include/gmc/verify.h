#pragma once

// Cross-checks between independently computed sides of the exact identities,
// Monte Carlo against closed forms, and a quadrature identity. Failures are
// reported, never thrown.

#include <map>
#include <string>
#include <vector>

#include "gmc/exactlaw.h"
#include "gmc/montecarlo.h"

namespace gmc::verify {

enum class CheckStatus { pass, fail, skipped };

const char* status_name(CheckStatus status);

struct CheckReport {
  std::string check_id;
  CheckStatus status = CheckStatus::skipped;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  std::map<std::string, std::string> metadata;
};

/// |lhs - rhs| / |rhs|, or |lhs - rhs| when rhs is zero.
double relative_error(double lhs, double rhs);

/// Parameter grid of the identity suite. Invalid combinations are dropped
/// per identity.
struct IdentityGrid {
  std::vector<double> gammas{0.6, 0.9, 1.2, 1.5, 1.75};
  std::vector<int> integer_ps{0, 1, 2, 3};
  std::vector<double> fractional_ps{-1.3, -0.6, 0.0, 0.45};
  std::vector<double> as{-0.4, 0.0, 0.35};
  std::vector<double> bs{-0.2, 0.0, 0.6};
  std::vector<double> martingale_ps{-1.5, -1.0, -0.5, 0.0, 0.5};
  int dgamma_points = 50;  // x values per gamma and shift
};

// Single checks. Each builds its own evaluators and is safe to run
// concurrently with the others.

/// Closed-form moment vs Selberg product, integer p.
CheckReport check_selberg(double gamma, int p, double a, double b, double tolerance = 1e-9);
/// p = 1 vs Gamma(a+1) Gamma(b+1) / Gamma(a+b+2).
CheckReport check_fubini(double gamma, double a, double b, double tolerance = 1e-10);
/// Ratio of exact moments across a shift vs the closed-form ratio.
CheckReport check_shift(const exactlaw::GmcParams& params, exactlaw::ShiftKind kind,
                        double tolerance = 1e-8);
/// C(p) / C(p - 1) vs its Euler Gamma form.
CheckReport check_c_ratio(double gamma, double p, double tolerance = 1e-8);
/// The two expressions of C2 (b = 0, 0 < a < 1 - gamma^2/4).
CheckReport check_c2(double gamma, double p, double a, double tolerance = 1e-8);
/// ln M from the product of laws vs ln M; absolute error.
CheckReport check_law_decomposition(const exactlaw::GmcParams& params,
                                    double tolerance = 1e-8);
/// Gamma_1 form vs Barnes G form of the derivative-martingale moment.
CheckReport check_martingale(double p, double tolerance = 1e-9);
/// Gamma_{gamma/2}(x) / Gamma_{gamma/2}(x + shift) from the integral vs the
/// Euler Gamma form; `large` selects the 2/gamma shift.
CheckReport check_dgamma_shift(double gamma, double x, bool large, double tolerance = 1e-9);
/// Gamma_{gamma/2}(Q/2) = 1.
CheckReport check_dgamma_unit(double gamma, double tolerance = 1e-9);

/// Every identity over the grid, sorted by check_id.
std::vector<CheckReport> run_identity_suite(const IdentityGrid& grid = IdentityGrid{},
                                            int threads = 1);

/// MC estimate of U or U~ at each t against the basis prediction. A failing
/// point is rerun once with 4x replicates.
std::vector<CheckReport> verify_observable_prediction(const exactlaw::GmcParams& params,
                                                      exactlaw::ObservableKind kind,
                                                      const std::vector<double>& t_list,
                                                      const montecarlo::McConfig& cfg);

/// int_0^inf ((u+1)^p - 1) u^{a-1} du vs Gamma(a) Gamma(-a-p) / Gamma(-p).
/// For 0 < a < -p the integral diverges as written; the subtracted 1 then
/// contributes zero under analytic continuation and the Beta integral
/// int_0^inf (u+1)^p u^{a-1} du is used. Other (a, p) give a skipped report.
CheckReport quadrature_identity_check(double a, double p, double tolerance = 1e-8);

/// Reports as a JSON array; numbers as 17-digit decimal strings.
std::string reports_to_json(const std::vector<CheckReport>& reports);
/// check_id,status,rel_err,tolerance
std::string reports_to_csv(const std::vector<CheckReport>& reports);

int count_failures(const std::vector<CheckReport>& reports);

/// %.17g
std::string format_number(double value);

}  // namespace gmc::verify

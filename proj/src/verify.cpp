#include "gmc/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <json.hpp>

#include "gmc/errors.h"
#include "gmc/specfun.h"

namespace gmc::verify {

namespace {

using exactlaw::GmcParams;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string params_id(const char* family, const GmcParams& p) {
  std::ostringstream id;
  id << family << ":g=" << short_number(p.gamma) << ":p=" << short_number(p.p)
     << ":a=" << short_number(p.a) << ":b=" << short_number(p.b);
  return id.str();
}

void echo_params(CheckReport& r, const GmcParams& p) {
  r.metadata["gamma"] = format_number(p.gamma);
  r.metadata["p"] = format_number(p.p);
  r.metadata["a"] = format_number(p.a);
  r.metadata["b"] = format_number(p.b);
}

void finish(CheckReport& r, double lhs, double rhs, double rel_err, double tolerance) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.rel_err = rel_err;
  r.tolerance = tolerance;
  r.status = (std::isfinite(rel_err) && rel_err <= tolerance) ? CheckStatus::pass
                                                               : CheckStatus::fail;
}

void mark_skipped(CheckReport& r, double tolerance, const std::string& why) {
  r.status = CheckStatus::skipped;
  r.tolerance = tolerance;
  r.lhs = r.rhs = r.rel_err = std::numeric_limits<double>::quiet_NaN();
  r.metadata["reason"] = why;
}

void mark_error(CheckReport& r, double tolerance, const std::exception& e) {
  r.status = CheckStatus::fail;
  r.tolerance = tolerance;
  r.lhs = r.rhs = r.rel_err = std::numeric_limits<double>::quiet_NaN();
  r.metadata["error"] = e.what();
}

// Runs body(report); bounds violations become skipped reports, any other
// library error a failed one.
CheckReport guarded(std::string id, double tolerance,
                    const std::function<void(CheckReport&)>& body) {
  CheckReport r;
  r.check_id = std::move(id);
  try {
    body(r);
  } catch (const BoundsError& e) {
    mark_skipped(r, tolerance, e.what());
  } catch (const GmcError& e) {
    mark_error(r, tolerance, e);
  }
  return r;
}

double log_ratio_error(double lhs_log, double rhs_log) {
  return std::fabs(std::expm1(lhs_log - rhs_log));
}

bool valid_moment(const GmcParams& p) {
  return p.a > -1.0 && p.b > -1.0 && exactlaw::bounds_check(p);
}

}  // namespace

const char* status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "unknown";
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value == 0.0 ? 0.0 : value);
  return buf;
}

double relative_error(double lhs, double rhs) {
  const double diff = std::fabs(lhs - rhs);
  return rhs == 0.0 ? diff : diff / std::fabs(rhs);
}

CheckReport check_selberg(double gamma, int p, double a, double b, double tolerance) {
  const GmcParams params{gamma, static_cast<double>(p), a, b};
  return guarded(params_id("selberg", params), tolerance, [&](CheckReport& r) {
    echo_params(r, params);
    const double lhs = exactlaw::exact_moment(params);
    const double rhs = exactlaw::selberg_product(gamma, p, a, b);
    finish(r, lhs, rhs, relative_error(lhs, rhs), tolerance);
  });
}

CheckReport check_fubini(double gamma, double a, double b, double tolerance) {
  const GmcParams params{gamma, 1.0, a, b};
  return guarded(params_id("fubini", params), tolerance, [&](CheckReport& r) {
    echo_params(r, params);
    const double lhs = exactlaw::exact_moment(params);
    const double rhs = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
    finish(r, lhs, rhs, relative_error(lhs, rhs), tolerance);
  });
}

CheckReport check_shift(const GmcParams& params, exactlaw::ShiftKind kind, double tolerance) {
  const char* family = "shift_a_g2";
  if (kind == exactlaw::ShiftKind::a_plus_one) {
    family = "shift_a_1";
  } else if (kind == exactlaw::ShiftKind::p_minus_one_to_p) {
    family = "shift_p";
  }
  return guarded(params_id(family, params), tolerance, [&](CheckReport& r) {
    echo_params(r, params);
    const specfun::DoubleGamma eval(params.gamma);
    const GmcParams other = exactlaw::shifted_params(params, kind);
    const double rhs = exactlaw::shift_ratio(params, kind);
    const double base = exactlaw::exact_log_moment(params, eval);
    const double moved = exactlaw::exact_log_moment(other, eval);
    const double lhs = kind == exactlaw::ShiftKind::p_minus_one_to_p ? std::exp(base - moved)
                                                                     : std::exp(moved - base);
    finish(r, lhs, rhs, relative_error(lhs, rhs), tolerance);
  });
}

CheckReport check_c_ratio(double gamma, double p, double tolerance) {
  std::ostringstream id;
  id << "c_ratio:g=" << short_number(gamma) << ":p=" << short_number(p);
  return guarded(id.str(), tolerance, [&](CheckReport& r) {
    r.metadata["gamma"] = format_number(gamma);
    r.metadata["p"] = format_number(p);
    if (!(2.0 / gamma - p * gamma / 2.0 > 0.0)) {
      mark_skipped(r, tolerance, "C(p) undefined");
      return;
    }
    const double g4 = 0.25 * gamma * gamma;
    const double lhs = exactlaw::log_c_of_p(gamma, p) - exactlaw::log_c_of_p(gamma, p - 1.0);
    const double rhs = 0.5 * std::log(2.0 * std::numbers::pi) +
                       ((p - 1.0) * g4 - 0.5) * std::log(0.5 * gamma) +
                       std::lgamma(1.0 - p * g4) - std::lgamma(1.0 - g4);
    r.metadata["compare"] = "log";
    finish(r, lhs, rhs, log_ratio_error(lhs, rhs), tolerance);
  });
}

CheckReport check_c2(double gamma, double p, double a, double tolerance) {
  const GmcParams params{gamma, p, a, 0.0};
  return guarded(params_id("c2", params), tolerance, [&](CheckReport& r) {
    echo_params(r, params);
    const double g4 = 0.25 * gamma * gamma;
    if (!(a > 0.0 && a < 1.0 - g4)) {
      mark_skipped(r, tolerance, "requires 0 < a < 1 - gamma^2/4");
      return;
    }
    const specfun::HypTriple h =
        exactlaw::hyp_triple(params, exactlaw::ObservableKind::U_gamma_sq_over_4);
    const specfun::DoubleGamma eval(gamma);
    const double lhs = p * specfun::gamma_fn(a + 1.0) * specfun::gamma_fn(-a - g4 - 1.0) /
                       specfun::gamma_fn(-g4) *
                       exactlaw::exact_moment({gamma, p - 1.0, a - g4, 0.0}, eval);
    // 1/Gamma(A) vanishes at p = 0, as does the left side.
    const double rhs = specfun::gamma_fn(h.c - 1.0) * specfun::gamma_fn(h.a - h.b + 1.0) *
                       specfun::rgamma(h.a) * specfun::rgamma(h.c - h.b) *
                       exactlaw::exact_moment(params, eval);
    finish(r, lhs, rhs, relative_error(lhs, rhs), tolerance);
  });
}

CheckReport check_law_decomposition(const GmcParams& params, double tolerance) {
  return guarded(params_id("law_decomp", params), tolerance, [&](CheckReport& r) {
    echo_params(r, params);
    const specfun::DoubleGamma eval(params.gamma);
    const double lhs = exactlaw::law_decomposition_log_moment(params, eval);
    const double rhs = exactlaw::exact_log_moment(params, eval);
    r.metadata["compare"] = "abs_log";
    finish(r, lhs, rhs, std::fabs(lhs - rhs), tolerance);
  });
}

CheckReport check_martingale(double p, double tolerance) {
  std::string id = "martingale:p=" + short_number(p);
  return guarded(id, tolerance, [&](CheckReport& r) {
    r.metadata["p"] = format_number(p);
    const double lhs = exactlaw::derivative_martingale_moment(p);
    const double rhs = exactlaw::derivative_martingale_moment_barnes(p);
    finish(r, lhs, rhs, relative_error(lhs, rhs), tolerance);
  });
}

CheckReport check_dgamma_shift(double gamma, double x, bool large, double tolerance) {
  std::ostringstream id;
  id << (large ? "dgamma_shift_large" : "dgamma_shift_small") << ":g=" << short_number(gamma)
     << ":x=" << short_number(x);
  return guarded(id.str(), tolerance, [&](CheckReport& r) {
    r.metadata["gamma"] = format_number(gamma);
    r.metadata["x"] = format_number(x);
    r.metadata["compare"] = "log";
    const specfun::DoubleGamma eval(gamma);
    const double step = large ? 2.0 / gamma : 0.5 * gamma;
    const double lhs = eval.log(x) - eval.log(x + step);
    const double rhs = large ? eval.log_shift_large(x) : eval.log_shift_small(x);
    finish(r, lhs, rhs, log_ratio_error(lhs, rhs), tolerance);
  });
}

CheckReport check_dgamma_unit(double gamma, double tolerance) {
  std::string id = "dgamma_unit:g=" + short_number(gamma);
  return guarded(id, tolerance, [&](CheckReport& r) {
    r.metadata["gamma"] = format_number(gamma);
    const specfun::DoubleGamma eval(gamma);
    const double lhs = eval(0.5 * eval.q());
    finish(r, lhs, 1.0, relative_error(lhs, 1.0), tolerance);
  });
}

std::vector<CheckReport> run_identity_suite(const IdentityGrid& grid, int threads) {
  std::vector<std::function<CheckReport()>> tasks;
  for (double g : grid.gammas) {
    const double g4 = 0.25 * g * g;
    for (double a : grid.as) {
      for (double b : grid.bs) {
        for (int p : grid.integer_ps) {
          if (valid_moment({g, static_cast<double>(p), a, b})) {
            tasks.push_back([=] { return check_selberg(g, p, a, b); });
          }
        }
        if (valid_moment({g, 1.0, a, b})) {
          tasks.push_back([=] { return check_fubini(g, a, b); });
        }
        for (double p : grid.fractional_ps) {
          const GmcParams params{g, p, a, b};
          if (!valid_moment(params)) {
            continue;
          }
          tasks.push_back([=] { return check_law_decomposition(params); });
          for (auto kind : {exactlaw::ShiftKind::a_plus_gamma2_over_4,
                            exactlaw::ShiftKind::a_plus_one,
                            exactlaw::ShiftKind::p_minus_one_to_p}) {
            if (valid_moment(exactlaw::shifted_params(params, kind))) {
              tasks.push_back([=] { return check_shift(params, kind); });
            }
          }
        }
      }
    }
    for (double p : grid.fractional_ps) {
      if (2.0 / g - p * g / 2.0 > 0.0) {
        tasks.push_back([=] { return check_c_ratio(g, p); });
      }
      for (double frac : {0.25, 0.6}) {
        const double a = frac * (1.0 - g4);
        const GmcParams base{g, p, a, 0.0};
        const GmcParams lowered{g, p - 1.0, a - g4, 0.0};
        if (valid_moment(base) && valid_moment(lowered)) {
          tasks.push_back([=] { return check_c2(g, p, a); });
        }
      }
    }
    tasks.push_back([=] { return check_dgamma_unit(g); });
    // Keep x and the shifted point inside (0, Q], where both sides are the
    // defining integral.
    for (int i = 1; i <= grid.dgamma_points; ++i) {
      const double frac = static_cast<double>(i) / grid.dgamma_points;
      tasks.push_back([=] { return check_dgamma_shift(g, frac * (2.0 / g), false); });
      tasks.push_back([=] { return check_dgamma_shift(g, frac * (0.5 * g), true); });
    }
  }
  for (double p : grid.martingale_ps) {
    tasks.push_back([=] { return check_martingale(p); });
  }

  std::vector<CheckReport> reports(tasks.size());
  montecarlo::parallel_for(static_cast<int>(tasks.size()), threads,
                           [&](int i) { reports[i] = tasks[i](); });
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CheckReport& l, const CheckReport& r) {
                     return l.check_id < r.check_id;
                   });
  return reports;
}

std::vector<CheckReport> verify_observable_prediction(const GmcParams& params,
                                                      exactlaw::ObservableKind kind,
                                                      const std::vector<double>& t_list,
                                                      const montecarlo::McConfig& cfg) {
  const double chi = exactlaw::insertion_exponent(params.gamma, kind);
  const char* kind_name = kind == exactlaw::ObservableKind::U_tilde ? "U_tilde" : "U";
  std::vector<montecarlo::MomentQuery> queries;
  std::vector<double> predicted;
  for (double t : t_list) {
    if (!(t < 0.0)) {
      throw DomainError("verify_observable_prediction: t must be negative");
    }
    queries.push_back({t, chi});
    predicted.push_back(exactlaw::predict_observable(params, kind, t));
  }
  const std::vector<montecarlo::McEstimate> first =
      montecarlo::mc_moments(params, queries, cfg);

  auto tolerance_for = [&](const montecarlo::McEstimate& e, double pred) {
    return (3.0 * e.std_error + 0.02 * std::fabs(pred)) / std::fabs(pred);
  };
  std::vector<montecarlo::McEstimate> chosen = first;
  std::vector<bool> rerun(t_list.size(), false);
  std::vector<montecarlo::MomentQuery> retry;
  std::vector<std::size_t> retry_index;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (relative_error(first[i].mean, predicted[i]) > tolerance_for(first[i], predicted[i])) {
      retry.push_back(queries[i]);
      retry_index.push_back(i);
    }
  }
  if (!retry.empty()) {
    montecarlo::McConfig big = cfg;
    big.replicates *= 4;
    const auto second = montecarlo::mc_moments(params, retry, big);
    for (std::size_t j = 0; j < retry.size(); ++j) {
      chosen[retry_index[j]] = second[j];
      rerun[retry_index[j]] = true;
    }
  }

  std::vector<CheckReport> reports;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    CheckReport r;
    std::ostringstream id;
    id << "observable_" << kind_name << ":g=" << short_number(params.gamma)
       << ":p=" << short_number(params.p) << ":a=" << short_number(params.a)
       << ":b=" << short_number(params.b) << ":t=" << short_number(t_list[i]);
    r.check_id = id.str();
    echo_params(r, params);
    const montecarlo::McEstimate& e = chosen[i];
    r.metadata["kind"] = kind_name;
    r.metadata["t"] = format_number(t_list[i]);
    r.metadata["chi"] = format_number(chi);
    r.metadata["stderr"] = format_number(e.std_error);
    r.metadata["replicates"] = std::to_string(e.replicates);
    r.metadata["n_modes"] = std::to_string(e.n_modes);
    r.metadata["seed"] = std::to_string(e.seed);
    r.metadata["rerun"] = rerun[i] ? "true" : "false";
    r.metadata["degraded_ci"] = e.degraded_ci ? "true" : "false";
    finish(r, e.mean, predicted[i], relative_error(e.mean, predicted[i]),
           tolerance_for(e, predicted[i]));
    reports.push_back(std::move(r));
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CheckReport& l, const CheckReport& r) {
                     return l.check_id < r.check_id;
                   });
  return reports;
}

CheckReport quadrature_identity_check(double a, double p, double tolerance) {
  std::ostringstream id;
  id << "quadrature:a=" << short_number(a) << ":p=" << short_number(p);
  CheckReport r;
  r.check_id = id.str();
  r.metadata["a"] = format_number(a);
  r.metadata["p"] = format_number(p);

  const bool literal = (p < 0.0 && a > -1.0 && a < 0.0) || (p > 0.0 && p < 1.0 && a > -1.0 && a < -p);
  const bool continued = p < 0.0 && a > 0.0 && a < -p;
  if (!literal && !continued) {
    mark_skipped(r, tolerance, "outside the region of the identity");
    return r;
  }
  r.metadata["form"] = literal ? "subtracted" : "beta_continuation";

  // Integrand on (0, 1] and the image of (1, inf) under u = 1/v.
  // The rule's outermost abscissae can round to 0, where the integrable
  // endpoint singularity would give inf; their weight is negligible.
  auto near = [=](double u) {
    if (u <= 0.0) {
      return 0.0;
    }
    if (!literal) {
      return std::exp(p * std::log1p(u)) * std::pow(u, a - 1.0);
    }
    // ((1+u)^p - 1)/u stays finite as u -> 0, u^{a-1} alone may not.
    const double slope = u > 1e-8 ? std::expm1(p * std::log1p(u)) / u : p * (1.0 + 0.5 * (p - 1.0) * u);
    return slope * std::pow(u, a);
  };
  auto far = [=](double v) {
    if (v <= 0.0) {
      return 0.0;
    }
    // (1 + 1/v)^p v^{-1-a} = (1 + v)^p v^{-p-1-a}
    const double head = std::exp(p * std::log1p(v)) * std::pow(v, -p - 1.0 - a);
    return literal ? head - std::pow(v, -1.0 - a) : head;
  };
  boost::math::quadrature::tanh_sinh<double> rule;
  const double quad_tol = 1e-13;
  double err_near = 0.0;
  double err_far = 0.0;
  double lhs = 0.0;
  try {
    lhs = rule.integrate(near, 0.0, 1.0, quad_tol, &err_near) +
          rule.integrate(far, 0.0, 1.0, quad_tol, &err_far);
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("quadrature_identity_check: ") + e.what());
  }
  const double rhs =
      specfun::gamma_fn(a) * specfun::gamma_fn(-a - p) / specfun::gamma_fn(-p);
  r.metadata["quad_error"] = format_number(err_near + err_far);
  if (!std::isfinite(lhs) || err_near + err_far > 0.1 * tolerance * std::fabs(rhs)) {
    throw ConvergenceError("quadrature_identity_check: integral did not converge");
  }
  finish(r, lhs, rhs, relative_error(lhs, rhs), tolerance);
  return r;
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const CheckReport& r : reports) {
    nlohmann::ordered_json row;
    row["check_id"] = r.check_id;
    row["status"] = status_name(r.status);
    row["lhs"] = format_number(r.lhs);
    row["rhs"] = format_number(r.rhs);
    row["rel_err"] = format_number(r.rel_err);
    row["tolerance"] = format_number(r.tolerance);
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : r.metadata) {
      meta[key] = value;
    }
    row["metadata"] = std::move(meta);
    out.push_back(std::move(row));
  }
  return out.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
  std::string out = "check_id,status,rel_err,tolerance\n";
  for (const CheckReport& r : reports) {
    out += r.check_id + "," + status_name(r.status) + "," + format_number(r.rel_err) + "," +
           format_number(r.tolerance) + "\n";
  }
  return out;
}

int count_failures(const std::vector<CheckReport>& reports) {
  return static_cast<int>(std::count_if(reports.begin(), reports.end(), [](const CheckReport& r) {
    return r.status == CheckStatus::fail;
  }));
}

}  // namespace gmc::verify

// gmc: exact GMC moments, reflection coefficients, Monte Carlo estimates and
// verification suites from the command line.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmc/errors.h"
#include "gmc/exactlaw.h"
#include "gmc/montecarlo.h"
#include "gmc/specfun.h"
#include "gmc/verify.h"
#include "output.h"

namespace {

using namespace gmc;
using cli::num;
using cli::Row;
using cli::Table;
using exactlaw::GmcParams;

constexpr int kExitDomain = 1;
constexpr int kExitVerify = 2;
constexpr int kExitUsage = 64;

struct OutputOptions {
  std::string format = "json";
  std::string path;
};

struct MomentOptions {
  double gamma = 1.0;
  double p = 0.0;
  double a = 0.0;
  double b = 0.0;
  GmcParams params() const { return {gamma, p, a, b}; }
};

struct McOptions {
  std::uint64_t seed = 0;
  int replicates = 10000;
  int n_modes = 4096;
  int m_cells = 0;
  int batches = 20;
  std::optional<int> threads;

  montecarlo::McConfig config() const {
    montecarlo::McConfig cfg;
    cfg.seed = seed;
    cfg.replicates = replicates;
    cfg.n_modes = n_modes;
    cfg.m_cells = m_cells;
    cfg.batches = batches;
    cfg.threads = resolve_threads();
    return cfg;
  }

  // --threads, else GMC_THREADS, else every hardware thread.
  int resolve_threads() const {
    if (threads) {
      return *threads;
    }
    if (const char* env = std::getenv("GMC_THREADS")) {
      try {
        return std::stoi(env);
      } catch (const std::exception&) {
        throw DomainError(std::string("GMC_THREADS is not an integer: ") + env);
      }
    }
    return 0;
  }
};

struct RangeOptions {
  std::vector<double> values;
  double from = 0.0;
  double to = 0.0;
  int count = 0;

  std::vector<double> resolve(double default_from, double default_to, int default_count,
                              bool geometric = false) const {
    if (!values.empty()) {
      return values;
    }
    const double lo = count > 0 || from != 0.0 || to != 0.0 ? from : default_from;
    const double hi = count > 0 || from != 0.0 || to != 0.0 ? to : default_to;
    const int n = count > 0 ? count : default_count;
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : double(i) / (n - 1);
      out.push_back(geometric ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    return out;
  }
};

void add_moment_options(CLI::App* sub, MomentOptions& m) {
  sub->add_option("--gamma", m.gamma, "Coupling gamma in (0, 2)")->required();
  sub->add_option("--p", m.p, "Moment order")->required();
  sub->add_option("--a", m.a, "Insertion exponent at 0")->default_val(0.0);
  sub->add_option("--b", m.b, "Insertion exponent at 1")->default_val(0.0);
}

void add_mc_options(CLI::App* sub, McOptions& mc, int default_replicates) {
  mc.replicates = default_replicates;
  sub->add_option("--seed", mc.seed, "Random seed")->required();
  sub->add_option("--replicates", mc.replicates, "Monte Carlo replicates")->capture_default_str();
  sub->add_option("--n-modes", mc.n_modes, "Chebyshev modes of the field")->capture_default_str();
  sub->add_option("--m-cells", mc.m_cells, "Quadrature cells (0: 8 per mode)")
      ->capture_default_str();
  sub->add_option("--batches", mc.batches, "Batches for the error bar")->capture_default_str();
  sub->add_option("--threads", mc.threads, "Worker threads (default GMC_THREADS or all)");
}

void add_range_options(CLI::App* sub, RangeOptions& r, const std::string& name) {
  sub->add_option("--" + name, r.values, "Explicit " + name + " values")->delimiter(',');
  sub->add_option("--from", r.from, "Range start");
  sub->add_option("--to", r.to, "Range end");
  sub->add_option("--count", r.count, "Range points");
}

Row echo(const GmcParams& p) {
  return {{"gamma", num(p.gamma)}, {"p", num(p.p)}, {"a", num(p.a)}, {"b", num(p.b)}};
}

void echo_mc(Row& row, const montecarlo::McConfig& cfg) {
  row.push_back({"seed", num(static_cast<unsigned long long>(cfg.seed))});
  row.push_back({"n_modes", num(cfg.n_modes)});
  row.push_back({"m_cells", num(cfg.m_cells > 0 ? cfg.m_cells : 8 * cfg.n_modes)});
  row.push_back({"replicates", num(cfg.replicates)});
  row.push_back({"batches", num(cfg.batches)});
}

Row concat(Row head, const Row& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

const char* shift_name(exactlaw::ShiftKind kind) {
  switch (kind) {
    case exactlaw::ShiftKind::a_plus_gamma2_over_4:
      return "a_plus_gamma2_over_4";
    case exactlaw::ShiftKind::a_plus_one:
      return "a_plus_one";
    case exactlaw::ShiftKind::p_minus_one_to_p:
      return "p_minus_one_to_p";
  }
  return "unknown";
}

exactlaw::ObservableKind parse_kind(const std::string& s) {
  if (s == "U") {
    return exactlaw::ObservableKind::U_gamma_sq_over_4;
  }
  return exactlaw::ObservableKind::U_tilde;
}

// Closed form matching an MC moment with insertion (x - t)^chi, if any.
std::optional<double> closed_form_for(const GmcParams& params, double t, double chi) {
  try {
    if (t == 0.0) {
      return exactlaw::exact_moment({params.gamma, params.p, params.a + chi, params.b});
    }
    const double g4 = 0.25 * params.gamma * params.gamma;
    if (chi == g4) {
      return exactlaw::predict_observable(params, exactlaw::ObservableKind::U_gamma_sq_over_4, t);
    }
    if (chi == 1.0) {
      return exactlaw::predict_observable(params, exactlaw::ObservableKind::U_tilde, t);
    }
  } catch (const GmcError&) {
  }
  return std::nullopt;
}

Table cmd_exact(const MomentOptions& m) {
  const GmcParams p = m.params();
  const exactlaw::MomentBreakdown br = exactlaw::exact_moment_breakdown(p);
  Table t{"exact", echo(p), {}};
  t.rows.push_back(concat(echo(p), {{"value", num(std::exp(br.log_value))},
                                    {"log_value", num(br.log_value)},
                                    {"log_two_pi", num(br.log_two_pi)},
                                    {"log_gamma_power", num(br.log_gamma_power)},
                                    {"log_euler_gamma", num(br.log_euler_gamma)},
                                    {"log_double_gamma", num(br.log_double_gamma)}}));
  return t;
}

Table cmd_selberg(const MomentOptions& m) {
  const GmcParams p = m.params();
  if (p.p != std::floor(p.p)) {
    throw DomainError("selberg: p must be an integer");
  }
  const double value = exactlaw::selberg_product(p.gamma, static_cast<int>(p.p), p.a, p.b);
  Table t{"selberg", echo(p), {}};
  t.rows.push_back(concat(echo(p), {{"value", num(value)}}));
  return t;
}

Table cmd_shift(const MomentOptions& m) {
  const GmcParams p = m.params();
  Table t{"shift", echo(p), {}};
  const specfun::DoubleGamma eval(p.gamma);
  for (auto kind : {exactlaw::ShiftKind::a_plus_gamma2_over_4, exactlaw::ShiftKind::a_plus_one,
                    exactlaw::ShiftKind::p_minus_one_to_p}) {
    const double ratio = exactlaw::shift_ratio(p, kind);
    const GmcParams other = exactlaw::shifted_params(p, kind);
    const double base = exactlaw::exact_log_moment(p, eval);
    const double moved = exactlaw::exact_log_moment(other, eval);
    const double from_moments = kind == exactlaw::ShiftKind::p_minus_one_to_p
                                    ? std::exp(base - moved)
                                    : std::exp(moved - base);
    t.rows.push_back(concat(echo(p), {{"shift", shift_name(kind)},
                                      {"closed_form_ratio", num(ratio)},
                                      {"moment_ratio", num(from_moments)},
                                      {"rel_err", num(verify::relative_error(from_moments, ratio))}}));
  }
  return t;
}

Table cmd_reflection(double gamma, double alpha, int dim) {
  Table t{"reflection",
          {{"gamma", num(gamma)}, {"alpha", num(alpha)}, {"dim", num(dim)}},
          {}};
  double value = 0.0;
  if (dim == 1) {
    value = exactlaw::reflection_boundary_1d(gamma, alpha);
  } else if (dim == 2) {
    value = exactlaw::reflection_bulk_2d(gamma, alpha);
  } else {
    throw DomainError("reflection: --dim must be 1 or 2");
  }
  t.rows.push_back({{"gamma", num(gamma)},
                    {"alpha", num(alpha)},
                    {"dim", num(dim)},
                    {"value", num(value)},
                    {"log_value", num(std::log(value))}});
  return t;
}

Table cmd_law_decomp(const MomentOptions& m) {
  const GmcParams p = m.params();
  const specfun::DoubleGamma eval(p.gamma);
  const double law = exactlaw::law_decomposition_log_moment(p, eval);
  const double exact = exactlaw::exact_log_moment(p, eval);
  const exactlaw::LawFactors f = exactlaw::law_factors(p);
  Table t{"law-decomp", echo(p), {}};
  t.rows.push_back(concat(echo(p), {{"log_moment_from_laws", num(law)},
                                    {"log_moment_exact", num(exact)},
                                    {"abs_diff", num(std::fabs(law - exact))},
                                    {"x1_b0", num(f.x1.b0)},
                                    {"x1_b1", num(f.x1.b1)},
                                    {"x1_b2", num(f.x1.b2)},
                                    {"x2_b0", num(f.x2.b0)},
                                    {"x2_b1", num(f.x2.b1)},
                                    {"x2_b2", num(f.x2.b2)},
                                    {"x3_b0", num(f.x3.b0)},
                                    {"x3_b1", num(f.x3.b1)},
                                    {"x3_b2", num(f.x3.b2)}}));
  return t;
}

Table cmd_dgamma(double gamma, const RangeOptions& r) {
  const specfun::DoubleGamma eval(gamma);
  Table t{"dgamma", {{"gamma", num(gamma)}}, {}};
  for (double x : r.resolve(0.1 * eval.q(), 2.0 * eval.q(), 20)) {
    const double lg = eval.log(x);
    t.rows.push_back(
        {{"gamma", num(gamma)}, {"x", num(x)}, {"log_value", num(lg)}, {"value", num(std::exp(lg))}});
  }
  return t;
}

Table cmd_barnes(const RangeOptions& r) {
  Table t{"barnes", {}, {}};
  for (double x : r.resolve(0.5, 5.0, 10)) {
    const double lg = specfun::log_barnes_g(x);
    t.rows.push_back({{"x", num(x)}, {"log_value", num(lg)}, {"value", num(std::exp(lg))}});
  }
  return t;
}

Table cmd_mc_moment(const MomentOptions& m, const std::vector<double>& ts, double chi,
                    const McOptions& mc) {
  const GmcParams p = m.params();
  const montecarlo::McConfig cfg = mc.config();
  std::vector<montecarlo::MomentQuery> queries;
  for (double t : ts) {
    queries.push_back({t, chi});
  }
  const auto estimates = montecarlo::mc_moments(p, queries, cfg);
  Row params = echo(p);
  echo_mc(params, cfg);
  Table t{"mc-moment", params, {}};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& e = estimates[i];
    const std::optional<double> exact = closed_form_for(p, ts[i], chi);
    Row row = params;
    row.push_back({"t", num(ts[i])});
    row.push_back({"chi", num(chi)});
    row.push_back({"estimate", num(e.mean)});
    row.push_back({"stderr", num(e.std_error)});
    row.push_back({"closed_form", exact ? num(*exact) : "nan"});
    row.push_back({"degraded_ci", e.degraded_ci ? "true" : "false"});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_tail(double gamma, double alpha, double eta, const RangeOptions& r,
               const McOptions& mc) {
  const montecarlo::McConfig cfg = mc.config();
  const std::vector<double> u_grid = r.resolve(10.0, 50.0, 9, true);
  const montecarlo::TailFit fit = montecarlo::mc_tail_fit(gamma, alpha, eta, u_grid, cfg);
  const double q = 0.5 * gamma + 2.0 / gamma;
  const double predicted_slope = -2.0 * (q - alpha) / gamma;
  const double log_r = exactlaw::log_reflection_boundary_1d(gamma, alpha);
  Row params{{"gamma", num(gamma)}, {"alpha", num(alpha)}, {"eta", num(eta)}};
  echo_mc(params, cfg);
  Table t{"tail", params, {}};
  for (std::size_t i = 0; i < fit.u_grid.size(); ++i) {
    Row row = params;
    row.push_back({"u", num(fit.u_grid[i])});
    row.push_back({"exceedances", num(fit.exceedances[i])});
    row.push_back({"log_survival", num(fit.log_survival[i])});
    row.push_back({"survival_lower", num(fit.wilson_lower[i])});
    row.push_back({"survival_upper", num(fit.wilson_upper[i])});
    row.push_back({"log_survival_closed_form", num(log_r + predicted_slope * std::log(fit.u_grid[i]))});
    row.push_back({"fitted_slope", num(fit.slope)});
    row.push_back({"predicted_slope", num(predicted_slope)});
    row.push_back({"fitted_intercept", num(fit.intercept)});
    row.push_back({"log_reflection_coefficient", num(log_r)});
    row.push_back({"r_squared", num(fit.r_squared)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_small_dev(double gamma, const RangeOptions& r, const McOptions& mc) {
  const montecarlo::McConfig cfg = mc.config();
  const montecarlo::SmallDeviation sd =
      montecarlo::mc_small_deviation(gamma, r.resolve(0.3, 0.8, 6), cfg);
  const double k = 4.0 / (gamma * gamma);
  Row params{{"gamma", num(gamma)}};
  echo_mc(params, cfg);
  Table t{"small-dev", params, {}};
  for (const auto& pt : sd.points) {
    Row row = params;
    row.push_back({"eps", num(pt.eps)});
    row.push_back({"count", num(pt.count)});
    row.push_back({"log_prob", num(pt.log_prob)});
    row.push_back({"fitted_c", num(sd.fitted_c)});
    row.push_back({"envelope_exponent", num(-sd.fitted_c * std::pow(pt.eps, -k))});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_predict_u(const MomentOptions& m, const std::string& kind_name,
                    const std::vector<double>& ts) {
  const GmcParams p = m.params();
  const exactlaw::ObservableKind kind = parse_kind(kind_name);
  const specfun::HypTriple h = exactlaw::hyp_triple(p, kind);
  Row params = echo(p);
  params.push_back({"kind", kind_name});
  Table t{"predict-u", params, {}};
  for (double x : ts) {
    Row row = params;
    row.push_back({"t", num(x)});
    row.push_back({"chi", num(exactlaw::insertion_exponent(p.gamma, kind))});
    row.push_back({"value", num(exactlaw::predict_observable(p, kind, x))});
    row.push_back({"A", num(h.a)});
    row.push_back({"B", num(h.b)});
    row.push_back({"C", num(h.c)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_martingale(const std::vector<double>& ps) {
  Table t{"martingale-moment", {}, {}};
  for (double p : ps) {
    const double g1 = exactlaw::derivative_martingale_moment(p);
    const double bg = exactlaw::derivative_martingale_moment_barnes(p);
    t.rows.push_back({{"p", num(p)},
                      {"gamma1_form", num(g1)},
                      {"barnes_form", num(bg)},
                      {"rel_err", num(verify::relative_error(g1, bg))}});
  }
  return t;
}

void emit(const std::string& text, const OutputOptions& out) {
  if (out.path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) {
    throw DomainError("cannot open output file " + out.path);
  }
  file << text;
}

void emit_table(const Table& t, const OutputOptions& out) {
  emit(out.format == "csv" ? cli::to_csv(t) : cli::to_json(t), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact moments and simulations of Gaussian multiplicative chaos on [0,1]"};
  app.require_subcommand(1);

  OutputOptions out;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--output", out.path, "Write to this file instead of stdout");
  };

  std::function<void()> action;

  MomentOptions moment;
  RangeOptions range;

  auto* exact = app.add_subcommand("exact", "Exact moment M(gamma, p, a, b) with its factors");
  add_moment_options(exact, moment);
  add_output(exact);
  exact->callback([&] { action = [&] { emit_table(cmd_exact(moment), out); }; });

  auto* selberg = app.add_subcommand("selberg", "Selberg product for integer p");
  add_moment_options(selberg, moment);
  add_output(selberg);
  selberg->callback([&] { action = [&] { emit_table(cmd_selberg(moment), out); }; });

  auto* shift = app.add_subcommand("shift", "The three shift-equation ratios");
  add_moment_options(shift, moment);
  add_output(shift);
  shift->callback([&] { action = [&] { emit_table(cmd_shift(moment), out); }; });

  double alpha = 1.0;
  int dim = 1;
  double gamma_only = 1.0;
  auto* reflection = app.add_subcommand("reflection", "Reflection coefficient (1d boundary or 2d bulk)");
  reflection->add_option("--gamma", gamma_only)->required();
  reflection->add_option("--alpha", alpha)->required();
  reflection->add_option("--dim", dim)->check(CLI::IsMember({1, 2}))->capture_default_str();
  add_output(reflection);
  reflection->callback([&] { action = [&] { emit_table(cmd_reflection(gamma_only, alpha, dim), out); }; });

  auto* law = app.add_subcommand("law-decomp", "Moment from the product-of-laws decomposition");
  add_moment_options(law, moment);
  add_output(law);
  law->callback([&] { action = [&] { emit_table(cmd_law_decomp(moment), out); }; });

  auto* dgamma = app.add_subcommand("dgamma", "Table of the double gamma function");
  dgamma->add_option("--gamma", gamma_only)->required();
  add_range_options(dgamma, range, "x");
  add_output(dgamma);
  dgamma->callback([&] { action = [&] { emit_table(cmd_dgamma(gamma_only, range), out); }; });

  auto* barnes = app.add_subcommand("barnes", "Table of the Barnes G function");
  add_range_options(barnes, range, "x");
  add_output(barnes);
  barnes->callback([&] { action = [&] { emit_table(cmd_barnes(range), out); }; });

  std::vector<double> ts{0.0};
  double chi = 0.0;
  auto* mcm = app.add_subcommand("mc-moment", "Monte Carlo moment next to its closed form");
  add_moment_options(mcm, moment);
  mcm->add_option("--t", ts, "Insertion points t <= 0")->delimiter(',')->capture_default_str();
  mcm->add_option("--chi", chi, "Insertion exponent")->capture_default_str();
  McOptions mcm_opts;
  add_mc_options(mcm, mcm_opts, 10000);
  add_output(mcm);
  mcm->callback([&] { action = [&] { emit_table(cmd_mc_moment(moment, ts, chi, mcm_opts), out); }; });

  double eta = 1.0;
  auto* tail = app.add_subcommand("tail", "Empirical tail of the boundary-insertion GMC mass");
  tail->add_option("--gamma", gamma_only)->required();
  tail->add_option("--alpha", alpha)->required();
  tail->add_option("--eta", eta, "Integrate over [0, eta]")->capture_default_str();
  add_range_options(tail, range, "u");
  McOptions tail_opts;
  add_mc_options(tail, tail_opts, 100000);
  add_output(tail);
  tail->callback([&] { action = [&] { emit_table(cmd_tail(gamma_only, alpha, eta, range, tail_opts), out); }; });

  auto* small = app.add_subcommand("small-dev", "Small-deviation probabilities without the mean mode");
  small->add_option("--gamma", gamma_only)->required();
  add_range_options(small, range, "eps");
  McOptions small_opts;
  add_mc_options(small, small_opts, 20000);
  add_output(small);
  small->callback([&] { action = [&] { emit_table(cmd_small_dev(gamma_only, range, small_opts), out); }; });

  std::string kind = "U";
  std::vector<double> pts{-0.1, -0.5, -2.0};
  auto* predict = app.add_subcommand("predict-u", "U(t) or U~(t) from the hypergeometric basis");
  add_moment_options(predict, moment);
  predict->add_option("--kind", kind)->check(CLI::IsMember({"U", "U_tilde"}))->capture_default_str();
  predict->add_option("--t", pts, "Points t < 0")->delimiter(',');
  add_output(predict);
  predict->callback([&] { action = [&] { emit_table(cmd_predict_u(moment, kind, pts), out); }; });

  std::vector<double> mps{-1.5, -1.0, -0.5, 0.0, 0.5};
  auto* mart = app.add_subcommand("martingale-moment", "Derivative-martingale moments");
  mart->add_option("--p", mps, "Orders p < 1")->delimiter(',');
  add_output(mart);
  mart->callback([&] { action = [&] { emit_table(cmd_martingale(mps), out); }; });

  std::string suite = "all";
  std::optional<std::uint64_t> verify_seed;
  McOptions vmc;
  vmc.replicates = 10000;
  auto* ver = app.add_subcommand("verify", "Verification suites");
  ver->add_option("--suite", suite)
      ->check(CLI::IsMember({"all", "identities", "observables", "quadrature"}))
      ->capture_default_str();
  ver->add_option("--seed", verify_seed, "Seed for the Monte Carlo suite");
  ver->add_option("--replicates", vmc.replicates)->capture_default_str();
  ver->add_option("--n-modes", vmc.n_modes)->capture_default_str();
  ver->add_option("--threads", vmc.threads);
  add_output(ver);
  int verify_failures = 0;
  ver->callback([&] {
    if ((suite == "all" || suite == "observables") && !verify_seed) {
      throw CLI::RequiredError("--seed (needed by the observables suite)");
    }
    action = [&] {
      std::vector<verify::CheckReport> reports;
      auto append = [&](std::vector<verify::CheckReport> more) {
        reports.insert(reports.end(), more.begin(), more.end());
      };
      if (suite == "all" || suite == "identities") {
        append(verify::run_identity_suite(verify::IdentityGrid{}, vmc.resolve_threads()));
      }
      if (suite == "all" || suite == "quadrature") {
        for (auto [a, p] : {std::pair{0.5, -1.0}, {0.3, -0.5}, {0.7, -2.0}, {-0.5, -0.7}, {-0.6, 0.3}}) {
          reports.push_back(verify::quadrature_identity_check(a, p));
        }
      }
      if (suite == "all" || suite == "observables") {
        vmc.seed = *verify_seed;
        const GmcParams params{1.0, -0.5, 0.2, 0.1};
        for (auto k : {exactlaw::ObservableKind::U_gamma_sq_over_4, exactlaw::ObservableKind::U_tilde}) {
          append(verify::verify_observable_prediction(params, k, {-0.1, -0.5, -2.0}, vmc.config()));
        }
      }
      std::stable_sort(reports.begin(), reports.end(), [](const auto& l, const auto& r) {
        return l.check_id < r.check_id;
      });
      emit(out.format == "csv" ? verify::reports_to_csv(reports) : verify::reports_to_json(reports), out);
      verify_failures = verify::count_failures(reports);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    action();
  } catch (const GmcError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  if (verify_failures > 0) {
    std::cerr << verify_failures << " failing checks\n";
    return kExitVerify;
  }
  return 0;
}

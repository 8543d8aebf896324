#include "gmc/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "gmc/errors.h"

namespace gmc::montecarlo {

namespace {

void check_config(const McConfig& cfg) {
  if (cfg.replicates < 1 || cfg.batches < 1 || cfg.replicates % cfg.batches != 0) {
    std::ostringstream msg;
    msg << "replicates (" << cfg.replicates << ") must be a positive multiple of batches ("
        << cfg.batches << ")";
    throw DomainError(msg.str());
  }
  if (cfg.n_modes < 1) {
    throw DomainError("n_modes must be >= 1");
  }
}

int cells_for(const McConfig& cfg) {
  return cfg.m_cells > 0 ? cfg.m_cells : 8 * cfg.n_modes;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(resolve_threads(threads), count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  constexpr int kChunk = 16;
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (;;) {
        const int start = next.fetch_add(kChunk);
        if (start >= count) {
          return;
        }
        const int stop = std::min(count, start + kChunk);
        for (int i = start; i < stop; ++i) {
          body(i);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
      next.store(count);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(run);
  }
  run();
  for (std::thread& th : pool) {
    th.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<std::vector<double>> sample_integrals(double gamma,
                                                  const std::vector<IntegrandSpec>& specs,
                                                  const McConfig& cfg, bool drop_mean) {
  check_config(cfg);
  const int cells = cells_for(cfg);
  const field::FieldSynthesizer synth(cfg.n_modes, cells);
  std::vector<std::vector<double>> weights;
  weights.reserve(specs.size());
  for (const IntegrandSpec& s : specs) {
    const field::QuadGrid grid{cells, s.a, s.b, s.x_max};
    weights.push_back(field::cell_weights(synth, gamma, grid, s.t, s.chi, drop_mean));
  }
  std::vector<std::vector<double>> out(specs.size(),
                                       std::vector<double>(cfg.replicates, 0.0));
  parallel_for(cfg.replicates, cfg.threads, [&](int r) {
    thread_local std::vector<double> values;
    thread_local std::vector<double> scratch;
    field::RngStream rng = field::make_stream(cfg.seed, static_cast<std::uint64_t>(r));
    const field::ChebFieldSample sample =
        field::sample_field(cfg.n_modes, rng, static_cast<std::uint64_t>(r));
    synth.synthesize(sample, drop_mean, values, scratch);
    for (std::size_t s = 0; s < specs.size(); ++s) {
      out[s][r] = field::weighted_exp_sum(weights[s], values, gamma);
    }
  });
  return out;
}

McEstimate moment_from_samples(const std::vector<double>& values, double p,
                               const McConfig& cfg) {
  check_config(cfg);
  const int n = static_cast<int>(values.size());
  if (n != cfg.replicates) {
    throw DomainError("moment_from_samples: sample count does not match replicates");
  }
  const int per_batch = n / cfg.batches;
  std::vector<double> batch_means(cfg.batches, 0.0);
  double total = 0.0;
  for (int b = 0; b < cfg.batches; ++b) {
    double sum = 0.0;
    for (int i = b * per_batch; i < (b + 1) * per_batch; ++i) {
      sum += p == 0.0 ? 1.0 : std::pow(values[i], p);
    }
    batch_means[b] = sum / per_batch;
    total += sum;
  }
  McEstimate est;
  est.mean = total / n;
  if (cfg.batches > 1) {
    double ss = 0.0;
    for (double m : batch_means) {
      ss += (m - est.mean) * (m - est.mean);
    }
    est.std_error = std::sqrt(ss / (static_cast<double>(cfg.batches) * (cfg.batches - 1)));
  }
  est.replicates = n;
  est.n_modes = cfg.n_modes;
  est.m_cells = cells_for(cfg);
  est.seed = cfg.seed;
  return est;
}

namespace {

void check_moment_params(const exactlaw::GmcParams& params) {
  if (!(params.a > -1.0) || !(params.b > -1.0)) {
    throw DomainError("Monte Carlo moments require a, b > -1");
  }
  if (!exactlaw::bounds_check(params)) {
    throw BoundsError("Monte Carlo moment: parameters violate the moment bounds");
  }
}

}  // namespace

std::vector<McEstimate> mc_moments(const exactlaw::GmcParams& params,
                                   const std::vector<MomentQuery>& queries,
                                   const McConfig& cfg) {
  check_moment_params(params);
  std::vector<IntegrandSpec> specs;
  for (const MomentQuery& q : queries) {
    if (!(q.t <= 0.0)) {
      throw DomainError("Monte Carlo moment: requires t <= 0");
    }
    specs.push_back({params.a, params.b, q.t, q.chi, 1.0});
  }
  const auto samples = sample_integrals(params.gamma, specs, cfg, false);
  exactlaw::GmcParams doubled = params;
  doubled.p = 2.0 * params.p;
  const bool degraded = !exactlaw::bounds_check(doubled);
  std::vector<McEstimate> out;
  for (const auto& values : samples) {
    McEstimate est = moment_from_samples(values, params.p, cfg);
    est.degraded_ci = degraded;
    out.push_back(est);
  }
  return out;
}

McEstimate mc_moment(const exactlaw::GmcParams& params, double t, double chi,
                     const McConfig& cfg) {
  return mc_moments(params, {{t, chi}}, cfg).front();
}

void wilson_interval(long k, long n, double z, double& lower, double& upper) {
  if (n <= 0) {
    lower = 0.0;
    upper = 1.0;
    return;
  }
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  lower = std::max(0.0, centre - half);
  upper = std::min(1.0, centre + half);
}

TailFit mc_tail_fit(double gamma, double alpha, double eta, const std::vector<double>& u_grid,
                    const McConfig& cfg) {
  if (!(gamma > 0.0 && gamma < 2.0)) {
    throw DomainError("mc_tail_fit: gamma must lie in (0, 2)");
  }
  if (!(alpha > 0.5 * gamma && alpha < 2.0 / gamma)) {
    throw DomainError("mc_tail_fit: alpha must lie in (gamma/2, 2/gamma)");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DomainError("mc_tail_fit: eta must lie in (0, 1]");
  }
  if (u_grid.size() < 2) {
    throw DomainError("mc_tail_fit: need at least two thresholds");
  }
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (!(u_grid[i] > 0.0) || (i > 0 && !(u_grid[i] > u_grid[i - 1]))) {
      throw DomainError("mc_tail_fit: u_grid must be positive and strictly increasing");
    }
  }
  const IntegrandSpec spec{-0.5 * gamma * alpha, 0.0, 0.0, 0.0, eta};
  std::vector<double> values = sample_integrals(gamma, {spec}, cfg, false).front();
  std::sort(values.begin(), values.end());

  TailFit fit;
  fit.u_grid = u_grid;
  fit.replicates = cfg.replicates;
  const long n = static_cast<long>(values.size());
  for (double u : u_grid) {
    const long above =
        static_cast<long>(values.end() - std::upper_bound(values.begin(), values.end(), u));
    double lo = 0.0;
    double hi = 0.0;
    wilson_interval(above, n, 1.959963984540054, lo, hi);
    fit.exceedances.push_back(above);
    fit.wilson_lower.push_back(lo);
    fit.wilson_upper.push_back(hi);
    fit.log_survival.push_back(above > 0 ? std::log(static_cast<double>(above) / n)
                                         : -std::numeric_limits<double>::infinity());
  }
  if (fit.exceedances.back() < 50) {
    std::ostringstream msg;
    msg << "mc_tail_fit: only " << fit.exceedances.back()
        << " exceedances at the largest threshold u = " << u_grid.back() << " (need 50)";
    throw ResolutionError(msg.str());
  }
  const std::size_t m = u_grid.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += std::log(u_grid[i]);
    sy += fit.log_survival[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(u_grid[i]) - mx;
    const double dy = fit.log_survival[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

namespace {
// A log-probability from fewer events than this is too noisy to difference.
constexpr long kResolvedEvents = 10;
}  // namespace

SmallDeviation mc_small_deviation(double gamma, const std::vector<double>& eps_grid,
                                  const McConfig& cfg) {
  if (!(gamma > 0.0 && gamma < 2.0)) {
    throw DomainError("mc_small_deviation: gamma must lie in (0, 2)");
  }
  std::vector<double> eps = eps_grid;
  std::sort(eps.begin(), eps.end());
  for (double e : eps) {
    if (!(e > 0.0)) {
      throw DomainError("mc_small_deviation: eps must be positive");
    }
  }
  std::vector<double> values = sample_integrals(gamma, {IntegrandSpec{}}, cfg, true).front();
  std::sort(values.begin(), values.end());
  SmallDeviation out;
  out.replicates = cfg.replicates;
  const double n = static_cast<double>(values.size());
  for (double e : eps) {
    const long count =
        static_cast<long>(std::upper_bound(values.begin(), values.end(), e) - values.begin());
    const double lp = count > 0 ? std::log(count / n) : -std::numeric_limits<double>::infinity();
    out.points.push_back({e, lp, count});
  }
  out.fitted_c = std::numeric_limits<double>::quiet_NaN();
  const double k = 4.0 / (gamma * gamma);
  const SmallDeviationPoint* first = nullptr;
  for (const SmallDeviationPoint& pt : out.points) {
    if (pt.count < kResolvedEvents) {
      continue;
    }
    if (first == nullptr) {
      first = &pt;
      continue;
    }
    // ln P(eps) ~ const - c eps^{-k} through the two smallest resolved eps.
    out.fitted_c = (pt.log_prob - first->log_prob) /
                   (std::pow(first->eps, -k) - std::pow(pt.eps, -k));
    break;
  }
  return out;
}

}  // namespace gmc::montecarlo

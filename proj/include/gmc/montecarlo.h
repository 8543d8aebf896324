#pragma once

// Monte Carlo estimation over independent replicates of the truncated field.
// Replicate r always draws from make_stream(seed, r) and results are folded
// in replicate order, so estimates do not depend on the number of workers.

#include <cstdint>
#include <functional>
#include <vector>

#include "gmc/exactlaw.h"
#include "gmc/field.h"

namespace gmc::montecarlo {

struct McConfig {
  int replicates = 10000;
  int n_modes = 4096;
  int m_cells = 0;  // 0: 8 cells per mode
  std::uint64_t seed = 0;
  int batches = 20;
  int threads = 0;  // 0: hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // batch-means standard error
  int replicates = 0;
  int n_modes = 0;
  int m_cells = 0;
  std::uint64_t seed = 0;
  bool degraded_ci = false;  // 2p outside the moment bounds
};

/// Workers used for `requested` (<= 0 means all hardware threads).
int resolve_threads(int requested);

/// Calls body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// One integrand on the shared grid: x^a (1-x)^b (x - t)^chi over [0, x_max].
struct IntegrandSpec {
  double a = 0.0;
  double b = 0.0;
  double t = 0.0;
  double chi = 0.0;
  double x_max = 1.0;
};

/// GMC integrals of every spec for every replicate: result[spec][replicate].
/// The same field realisation is used for all specs of a replicate.
std::vector<std::vector<double>> sample_integrals(double gamma,
                                                  const std::vector<IntegrandSpec>& specs,
                                                  const McConfig& cfg, bool drop_mean);

/// Mean of values^p with batch-means error bars.
McEstimate moment_from_samples(const std::vector<double>& values, double p,
                               const McConfig& cfg);

/// E[(int (x - t)^chi x^a (1-x)^b e^{gamma X/2} dx)^p] by simulation.
/// BoundsError outside the moment bounds, DomainError for a or b <= -1.
McEstimate mc_moment(const exactlaw::GmcParams& params, double t, double chi,
                     const McConfig& cfg);

/// Several (t, chi) at once on shared replicates.
struct MomentQuery {
  double t = 0.0;
  double chi = 0.0;
};
std::vector<McEstimate> mc_moments(const exactlaw::GmcParams& params,
                                   const std::vector<MomentQuery>& queries,
                                   const McConfig& cfg);

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> u_grid;
  std::vector<double> log_survival;
  std::vector<long> exceedances;
  std::vector<double> wilson_lower;  // 95% interval on P(I > u)
  std::vector<double> wilson_upper;
  double r_squared = 0.0;
  int replicates = 0;
};

/// Wilson score interval for k successes in n trials.
void wilson_interval(long k, long n, double z, double& lower, double& upper);

/// Least-squares line of ln P(I > u) on ln u for I = int_0^eta x^{-gamma alpha/2}
/// e^{gamma X/2} dx. DomainError unless alpha in (gamma/2, 2/gamma) and u_grid
/// is strictly increasing; ResolutionError if fewer than 50 exceedances at the
/// largest u.
TailFit mc_tail_fit(double gamma, double alpha, double eta, const std::vector<double>& u_grid,
                    const McConfig& cfg);

struct SmallDeviationPoint {
  double eps = 0.0;
  double log_prob = 0.0;  // -inf when no events
  long count = 0;
};

struct SmallDeviation {
  std::vector<SmallDeviationPoint> points;  // sorted by eps
  double fitted_c = 0.0;  // from the two smallest eps with >= 10 events; NaN if fewer
  int replicates = 0;
};

/// Empirical ln P(int_0^1 e^{gamma X_perp/2} dx <= eps), mean mode removed.
SmallDeviation mc_small_deviation(double gamma, const std::vector<double>& eps_grid,
                                  const McConfig& cfg);

}  // namespace gmc::montecarlo

#include "gmc/field.h"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <fftw3.h>

#include "gmc/errors.h"
#include "gmc/specfun.h"

namespace gmc::field {

namespace {

const double kLn2 = std::numbers::ln2;

// FFTW's planner is not reentrant; execution on separate arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// x = cos^2(theta/2) and 1 - x = sin^2(theta/2) at theta = pi j / M, both
// written as sines so that neither end loses digits.
struct EdgePoint {
  double x;
  double y;
};

EdgePoint edge_point(int j, int m_cells) {
  const double scale = 0.5 * std::numbers::pi / m_cells;
  const double c = std::sin(scale * (m_cells - j));
  const double s = std::sin(scale * j);
  return {c * c, s * s};
}

double mass_between(double a1, double b1, double full, EdgePoint lo, EdgePoint hi) {
  namespace bm = boost::math;
  if (!(hi.x > lo.x)) {
    return 0.0;
  }
  if (hi.x <= 0.5) {
    const double upper = hi.x > 0.0 ? bm::ibeta(a1, b1, hi.x) : 0.0;
    const double lower = lo.x > 0.0 ? bm::ibeta(a1, b1, lo.x) : 0.0;
    return full * (upper - lower);
  }
  if (lo.x >= 0.5) {
    const double upper = lo.y > 0.0 ? bm::ibeta(b1, a1, lo.y) : 0.0;
    const double lower = hi.y > 0.0 ? bm::ibeta(b1, a1, hi.y) : 0.0;
    return full * (upper - lower);
  }
  const double left = lo.x > 0.0 ? bm::ibeta(a1, b1, lo.x) : 0.0;
  const double right = hi.y > 0.0 ? bm::ibeta(b1, a1, hi.y) : 0.0;
  return full * ((1.0 - left) - right);
}

}  // namespace

RngStream make_stream(std::uint64_t seed, std::uint64_t replicate) {
  // seed ^ replicate would make nearby seeds permutations of each other.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return RngStream(seq);
}

ChebFieldSample sample_field(int n_modes, RngStream& rng, std::uint64_t seed_tag) {
  if (n_modes < 1) {
    throw DomainError("sample_field: n_modes must be >= 1");
  }
  std::normal_distribution<double> normal;
  ChebFieldSample s;
  s.n_modes = n_modes;
  s.seed_tag = seed_tag;
  s.alpha.resize(static_cast<std::size_t>(n_modes) + 1);
  for (double& v : s.alpha) {
    v = normal(rng);
  }
  return s;
}

double eval_field(const ChebFieldSample& sample, double x, bool drop_mean) {
  const double u = 2.0 * x - 1.0;
  double value = drop_mean ? 0.0 : 2.0 * std::sqrt(kLn2) * sample.alpha[0];
  double prev = 1.0;  // T_0
  double cur = u;     // T_1
  for (int n = 1; n <= sample.n_modes; ++n) {
    value += 2.0 * sample.alpha[n] / std::sqrt(static_cast<double>(n)) * cur;
    const double next = 2.0 * u * cur - prev;
    prev = cur;
    cur = next;
  }
  return value;
}

double field_variance(int n_modes, double x) {
  const double u = 2.0 * x - 1.0;
  double value = 4.0 * kLn2;
  double prev = 1.0;
  double cur = u;
  for (int n = 1; n <= n_modes; ++n) {
    value += 4.0 / n * cur * cur;
    const double next = 2.0 * u * cur - prev;
    prev = cur;
    cur = next;
  }
  return value;
}

QuadGrid default_grid(int n_modes, double a, double b) {
  return QuadGrid{8 * n_modes, a, b, 1.0};
}

FieldSynthesizer::FieldSynthesizer(int n_modes, int m_cells)
    : n_modes_(n_modes), m_cells_(m_cells), plan_(nullptr) {
  if (n_modes < 1) {
    throw DomainError("FieldSynthesizer: n_modes must be >= 1");
  }
  if (m_cells < 4 * n_modes) {
    std::ostringstream msg;
    msg << "quadrature grid has " << m_cells << " cells; at least 4 * n_modes = "
        << 4 * n_modes << " are required";
    throw GridError(msg.str());
  }
  std::vector<double> in(m_cells, 0.0);
  std::vector<double> out(m_cells, 0.0);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_r2r_1d(m_cells, in.data(), out.data(), FFTW_REDFT01,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (plan_ == nullptr) {
    throw GmcError("FieldSynthesizer: FFTW planning failed");
  }

  x_mid_.resize(m_cells);
  for (int k = 0; k < m_cells; ++k) {
    const double c = std::sin(0.5 * std::numbers::pi * (m_cells - k - 0.5) / m_cells);
    x_mid_[k] = c * c;  // (1 + cos theta_k) / 2
  }

  // sum_n (4/n) cos^2(n theta) = 2 H_N + sum_n (2/n) cos(2 n theta); the last
  // sum is a DCT-III with input 1/n at index 2n (2N < M here).
  std::fill(in.begin(), in.end(), 0.0);
  double harmonic = 0.0;
  for (int n = 1; n <= n_modes; ++n) {
    in[2 * n] = 1.0 / n;
    harmonic += 1.0 / n;
  }
  dct3(in.data(), out.data());
  variance_.resize(m_cells);
  for (int k = 0; k < m_cells; ++k) {
    variance_[k] = 4.0 * kLn2 + 2.0 * harmonic + out[k];
  }
}

FieldSynthesizer::~FieldSynthesizer() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

double FieldSynthesizer::x_edge(int j) const { return edge_point(j, m_cells_).x; }

void FieldSynthesizer::dct3(const double* in, double* out) const {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_), const_cast<double*>(in), out);
}

void FieldSynthesizer::synthesize(const ChebFieldSample& sample, bool drop_mean,
                                  std::vector<double>& out,
                                  std::vector<double>& scratch) const {
  if (sample.n_modes != n_modes_ ||
      sample.alpha.size() != static_cast<std::size_t>(n_modes_) + 1) {
    throw DomainError("FieldSynthesizer: sample has the wrong number of modes");
  }
  scratch.assign(m_cells_, 0.0);
  out.resize(m_cells_);
  // REDFT01: Y_k = X_0 + 2 sum_{n>=1} X_n cos(pi n (k + 1/2) / M).
  scratch[0] = drop_mean ? 0.0 : 2.0 * std::sqrt(kLn2) * sample.alpha[0];
  for (int n = 1; n <= n_modes_; ++n) {
    scratch[n] = sample.alpha[n] / std::sqrt(static_cast<double>(n));
  }
  dct3(scratch.data(), out.data());
}

double beta_cell_mass(double a, double b, double lo, double hi) {
  if (!(a > -1.0) || !(b > -1.0)) {
    throw DomainError("beta_cell_mass: requires a, b > -1");
  }
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  const double full = boost::math::beta(a + 1.0, b + 1.0);
  return mass_between(a + 1.0, b + 1.0, full, {lo, 1.0 - lo}, {hi, 1.0 - hi});
}

std::vector<double> cell_weights(const FieldSynthesizer& synth, double gamma,
                                 const QuadGrid& grid, double t, double chi,
                                 bool drop_mean) {
  if (!(grid.a > -1.0) || !(grid.b > -1.0)) {
    throw DomainError("cell_weights: Monte Carlo integrals require a, b > -1");
  }
  if (!(t <= 0.0)) {
    throw DomainError("cell_weights: requires t <= 0");
  }
  if (grid.m_cells != synth.m_cells()) {
    throw GridError("cell_weights: grid and synthesizer disagree on m_cells");
  }
  const int m = synth.m_cells();
  const double a1 = grid.a + 1.0;
  const double b1 = grid.b + 1.0;
  const double full = boost::math::beta(a1, b1);
  const double shift = drop_mean ? 4.0 * kLn2 : 0.0;
  const double cut = std::min(grid.x_max, 1.0);
  const EdgePoint cut_point{cut, 1.0 - cut};
  std::vector<double> w(m, 0.0);
  EdgePoint upper = edge_point(0, m);  // x = 1
  for (int k = 0; k < m; ++k) {
    const EdgePoint lower = edge_point(k + 1, m);
    if (lower.x < cut) {
      const EdgePoint top = upper.x > cut ? cut_point : upper;
      const double mass = mass_between(a1, b1, full, lower, top);
      const double x = synth.x_mid()[k];
      const double insertion = chi == 0.0 ? 1.0 : std::pow(x - t, chi);
      const double var = synth.variance()[k] - shift;
      w[k] = mass * insertion * std::exp(-0.125 * gamma * gamma * var);
    }
    upper = lower;
  }
  return w;
}

double weighted_exp_sum(const std::vector<double>& weights,
                        const std::vector<double>& field_values, double gamma) {
  const double h = 0.5 * gamma;
  double sum = 0.0;
  const std::size_t m = weights.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (weights[k] != 0.0) {
      sum += weights[k] * std::exp(h * field_values[k]);
    }
  }
  return sum;
}

double gmc_integral(const ChebFieldSample& sample, double gamma, double a, double b,
                    double t, double chi, const QuadGrid& grid, bool drop_mean) {
  QuadGrid g = grid;
  g.a = a;
  g.b = b;
  const FieldSynthesizer synth(sample.n_modes, g.m_cells);
  const std::vector<double> w = cell_weights(synth, gamma, g, t, chi, drop_mean);
  std::vector<double> values;
  std::vector<double> scratch;
  synth.synthesize(sample, drop_mean, values, scratch);
  return weighted_exp_sum(w, values, gamma);
}

double y_gamma_from_exponential(double gamma, double e) {
  const double g = 0.25 * gamma * gamma;
  return std::pow(e, -g) / specfun::gamma_fn(1.0 - g);
}

double sample_y_gamma(double gamma, RngStream& rng) {
  if (!(gamma > 0.0 && gamma < 2.0)) {
    throw DomainError("sample_y_gamma: gamma must lie in (0, 2)");
  }
  std::exponential_distribution<double> expo(1.0);
  return y_gamma_from_exponential(gamma, expo(rng));
}

}  // namespace gmc::field

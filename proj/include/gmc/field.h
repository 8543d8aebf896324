#pragma once

// Truncated Chebyshev synthesis of the log-correlated field on [0,1],
//   X_N(x) = 2 sqrt(ln 2) alpha_0 + sum_{n=1}^{N} (2 alpha_n / sqrt(n)) T_n(2x - 1),
// and cut-off GMC integrals of (x - t)^chi x^a (1 - x)^b e^{gamma X_N / 2}
// renormalised by the pointwise variance.
//
// Quadrature cells are uniform in the angle theta with x = (1 + cos theta)/2,
// so T_n(2x - 1) = cos(n theta) and the field on all cell centres is one
// DCT-III. Each cell carries the exact integral of x^a (1 - x)^b over it
// (incomplete Beta), times the smooth factors at the centre.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace gmc::field {

/// Per-replicate random stream. Seeded from (seed, replicate) only.
using RngStream = std::mt19937_64;

RngStream make_stream(std::uint64_t seed, std::uint64_t replicate);

struct ChebFieldSample {
  std::vector<double> alpha;  // alpha_0 .. alpha_N
  int n_modes = 0;
  std::uint64_t seed_tag = 0;
};

/// N + 1 i.i.d. standard normals.
ChebFieldSample sample_field(int n_modes, RngStream& rng, std::uint64_t seed_tag = 0);

/// X_N(x) by the three-term recurrence; drop_mean removes the alpha_0 mode.
double eval_field(const ChebFieldSample& sample, double x, bool drop_mean);

/// E[X_N(x)^2] = 4 ln 2 + sum_{n<=N} (4/n) T_n(2x - 1)^2.
double field_variance(int n_modes, double x);

struct QuadGrid {
  int m_cells = 0;
  double a = 0.0;
  double b = 0.0;
  double x_max = 1.0;  // integrate over [0, x_max] only
};

/// 8 cells per mode.
QuadGrid default_grid(int n_modes, double a = 0.0, double b = 0.0);

/// Field values on the cell centres of an angle-uniform grid.
class FieldSynthesizer {
 public:
  /// GridError if m_cells < 4 n_modes.
  FieldSynthesizer(int n_modes, int m_cells);
  ~FieldSynthesizer();
  FieldSynthesizer(const FieldSynthesizer&) = delete;
  FieldSynthesizer& operator=(const FieldSynthesizer&) = delete;

  int n_modes() const { return n_modes_; }
  int m_cells() const { return m_cells_; }
  /// Cell k spans theta in [pi k / M, pi (k+1) / M]; x decreases with k.
  const std::vector<double>& x_mid() const { return x_mid_; }
  double x_edge(int j) const;
  /// Var X_N at each cell centre, including the 4 ln 2 of the mean mode.
  const std::vector<double>& variance() const { return variance_; }

  /// X_N at every cell centre; `out` and `scratch` are resized as needed.
  void synthesize(const ChebFieldSample& sample, bool drop_mean, std::vector<double>& out,
                  std::vector<double>& scratch) const;

 private:
  void dct3(const double* in, double* out) const;

  int n_modes_;
  int m_cells_;
  std::vector<double> x_mid_;
  std::vector<double> variance_;
  void* plan_;  // fftw_plan
};

/// Deterministic part of the integrand per cell:
///   mass_k(a, b, x_max) (x_k - t)^chi exp(-gamma^2/8 Var_k).
/// With drop_mean the variance of the mean mode (4 ln 2) is left out.
std::vector<double> cell_weights(const FieldSynthesizer& synth, double gamma,
                                 const QuadGrid& grid, double t, double chi,
                                 bool drop_mean);

/// Exact integral of x^a (1 - x)^b over [lo, hi] within [0, 1].
double beta_cell_mass(double a, double b, double lo, double hi);

/// sum_k w_k exp(gamma/2 X_k).
double weighted_exp_sum(const std::vector<double>& weights,
                        const std::vector<double>& field_values, double gamma);

/// One-shot GMC integral for a single sample (builds the grid each call).
/// Requires a, b > -1 and t <= 0.
double gmc_integral(const ChebFieldSample& sample, double gamma, double a, double b,
                    double t, double chi, const QuadGrid& grid, bool drop_mean);

/// Y_gamma = E^{-gamma^2/4} / Gamma(1 - gamma^2/4), E a unit exponential.
double y_gamma_from_exponential(double gamma, double e);
double sample_y_gamma(double gamma, RngStream& rng);

}  // namespace gmc::field

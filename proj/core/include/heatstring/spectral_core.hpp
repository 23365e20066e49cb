#pragma once

// Domain types of the truncated heated-string model and the maps between the
// real-space grid and the Fourier coefficients
//
//   u(x)     = sum_{n=1..N} u_n sin(nx)
//   u_t(x)   = sum_{n=1..N} v_n sin(nx)
//   theta(x) = theta_0 + sum_{n=1..N} theta_n cos(nx)
//
// on [0, pi].

#include <span>
#include <vector>

namespace heatstring {

struct ModelParams {
  double mu = 1.0;      // coupling constant
  double a = 1.0;       // linearization temperature
  int n_modes = 1;      // truncation N
  double s = 0.8;       // Sobolev index used by the weighted norms
  int grid_points = 3;  // M; the grid has M + 1 samples including both ends
  // The decay estimates need s in (3/4, 1). Plain norm evaluation at other s
  // (0 or 1 for diagnostics) must opt in explicitly.
  bool allow_any_s = false;

  // Builds a validated parameter set with grid_points = max(4N, 2N + 1).
  static ModelParams make(double mu, double a, int n_modes, double s = 0.8);

  // Throws DomainError / AliasingError when an invariant is violated.
  void validate() const;
};

struct SpectralState {
  double theta0 = 0.0;
  std::vector<double> u;      // u_n, n = 1..N stored at index n - 1
  std::vector<double> v;      // v_n = u_n'
  std::vector<double> theta;  // theta_n, n >= 1

  static SpectralState zeros(int n_modes);
  int modes() const noexcept { return static_cast<int>(u.size()); }

  // DimensionError unless all three sequences have n_modes entries, DomainError
  // on non-finite entries.
  void check(const ModelParams& params) const;
};

struct GridField {
  std::vector<double> x;  // x_j = j * pi / M, j = 0..M
  std::vector<double> u;
  std::vector<double> u_t;
  std::vector<double> theta;
};

struct NormRecord {
  double t = 0.0;
  double energy = 0.0;
  double hs_u_x = 0.0;        // (sum n^{2s} (n u_n)^2)^{1/2}
  double hs_u_t = 0.0;        // (sum n^{2s} v_n^2)^{1/2}
  double hs_theta_dev = 0.0;  // (sum n^{2s} theta_n^2)^{1/2}
  double theta0_dev = 0.0;    // |theta_0 - theta_inf|
  double min_theta = 0.0;     // minimum of the synthesized temperature
};

std::vector<double> uniform_grid(int grid_points);

GridField synthesize(const SpectralState& state, const ModelParams& params);

// Discrete sine/cosine transforms by the composite trapezoid rule on the M + 1
// point grid. Exact for fields band-limited to N whenever M >= 2N + 1.
SpectralState analyze(const GridField& field, const ModelParams& params);

// E = 1/2 int u_t^2 + 1/2 int u_x^2 + int theta, evaluated from coefficients:
// E = pi/4 sum v_n^2 + pi/4 sum n^2 u_n^2 + pi theta_0.
double energy(const SpectralState& state, const ModelParams& params);

// Equilibrium temperature E(0) / pi.
double theta_infinity(const SpectralState& initial, const ModelParams& params);

// (sum_{n>=1} n^{2s} c_n^2)^{1/2} with c_n stored at index n - 1.
double hs_seminorm(std::span<const double> coeffs, double s);

// Weighted seminorms of (n u_n), (v_n), (theta_n) plus |theta_0 - theta_inf|.
NormRecord norm_record(double t, const SpectralState& state, const ModelParams& params,
                       double theta_inf, bool with_min_theta = true);

}  // namespace heatstring

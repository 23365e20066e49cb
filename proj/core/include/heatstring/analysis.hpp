#pragma once

// Exponential-rate fitting and small regression helpers used by the reports.

#include <string>
#include <utility>
#include <vector>

#include "heatstring/integrator.hpp"
#include "heatstring/linear_spectral.hpp"

namespace heatstring {

struct DecayFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double fitted_rate = 0.0;  // -slope of log(value) against t
  double r_squared = 0.0;
  double predicted_alpha = 0.0;
  double slowest_mode_rate = 0.0;
  std::size_t points = 0;
};

// Least squares on log(value) over samples with t in [t_lo, t_hi].
// DomainError for non-positive values in the window or fewer than two points.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, double t_lo,
                   double t_hi);

// Last half of the run without the final 5%: [0.5 T, 0.95 T].
std::pair<double, double> default_window(double t_end);

// Shrinks t_hi to just before the first sample in [t_lo, t_hi] whose value is
// at or below `floor`; the series is then above round-off on the window.
double truncate_at_floor(const std::vector<double>& t, const std::vector<double>& value,
                         double t_lo, double t_hi, double floor);

// Block maxima over consecutive windows of width `block` starting at t[0];
// incomplete trailing blocks are dropped. Used to fit oscillating norms.
std::pair<std::vector<double>, std::vector<double>> peak_envelope(const std::vector<double>& t,
                                                                  const std::vector<double>& value,
                                                                  double block);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Named columns of a trajectory's norm records.
std::vector<double> norm_column(const TrajectoryRecord& traj, const std::string& name);

// Level below which a norm column is integration noise rather than decay:
// max(1e3 eps max(1, theta_inf), 10 max_t |E(t) - E(0)| / pi). theta0_dev
// settles at the energy error of the scheme; on small data the H^s norms
// reach it too before 20 / alpha. Linearized runs use the round-off term only.
double noise_floor(const TrajectoryRecord& traj);

// Fit of one column on default_window(T_eff), where T_eff is the end of the
// run or the last time before the column first drops to noise_floor.
// With envelope_block > 0 the fit runs on peak_envelope(..., envelope_block).
DecayFit fit_column(const TrajectoryRecord& traj, const std::string& column,
                    double envelope_block = 0.0);

// Smallest -Re(lambda) over n = 1..N and the three branches of A_{n,a}.
struct SlowestMode {
  int n = 0;
  Branch branch = Branch::Real;
  double rate = 0.0;
};
SlowestMode slowest_mode(const ModelParams& params);

// Log-log slopes of the asymptotic errors against n over powers of two in
// [n_min, n_max]. Only n with a non-degenerate exact system are used.
struct AsymptoticSlopes {
  std::vector<int> ns;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double residual_V1 = 0.0;
  double residual_V2 = 0.0;
  double residual_V3 = 0.0;
  double similarity = 0.0;
};
AsymptoticSlopes asymptotic_slopes(const ModelParams& params, int n_min, int n_max);

}  // namespace heatstring

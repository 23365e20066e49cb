#pragma once

// Right-hand side of the truncated Fourier ODE system
//
//   u_n'      = v_n
//   v_n'      = -n^2 u_n - mu n theta_n
//   theta_0'  = (mu/2) sum_l theta_l l v_l
//   theta_n'  = -n^2 theta_n + (mu/2) [cauchy + tail_left + tail_right] + mu theta_0 n v_n

#include <vector>

#include "heatstring/spectral_core.hpp"

namespace heatstring {

struct RhsOutput {
  double d_theta0 = 0.0;
  std::vector<double> d_u;
  std::vector<double> d_v;
  std::vector<double> d_theta;
};

RhsOutput rhs(const SpectralState& state, const ModelParams& params);

// The quadratic sums of the theta_n equation, (mu/2)[cauchy + left + right],
// for n = 1..N. Shared by rhs and g3 so both see identical round-off.
std::vector<double> quadratic_coupling(const SpectralState& state, const ModelParams& params);

// Forcing of the theta_n equation relative to the linearization temperature a:
//   theta_n' = -n^2 theta_n + a mu n v_n + g3(n).
double g3(const SpectralState& state, const ModelParams& params, int n);

// All g3(n), n = 1..N, in one O(N^2) pass.
std::vector<double> g3_all(const SpectralState& state, const ModelParams& params);

// Linearization about theta_0 = a: quadratic sums dropped, theta_0 frozen.
//   theta_n' = -n^2 theta_n + a mu n v_n
RhsOutput rhs_linear(const SpectralState& state, const ModelParams& params);

}  // namespace heatstring

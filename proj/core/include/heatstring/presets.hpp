#pragma once

// Initial conditions. Every preset keeps u_n = O(n^-3) and v_n, theta_n = O(n^-2).

#include <cstdint>
#include <string>
#include <vector>

#include "heatstring/spectral_core.hpp"

namespace heatstring {

class Config;

// theta = theta0 everywhere, string at rest.
SpectralState preset_equilibrium(const ModelParams& params, double theta0);

// Explicit coefficient lists; missing entries are zero, extra entries are an error.
SpectralState preset_fourier(const ModelParams& params, double theta0,
                             const std::vector<double>& u, const std::vector<double>& v,
                             const std::vector<double>& theta);

// u(x) = amplitude b(x), theta(x) = theta0 + amplitude b(x), u_t = 0 with
// b(x) = sin(x) exp(-((x - center) / width)^2), projected by quadrature.
SpectralState preset_bump(const ModelParams& params, double theta0, double amplitude,
                          double center, double width);

// u_n = amplitude r / n^{decay+1}, v_n and theta_n = amplitude r / n^decay with
// r uniform in [-1, 1) from mt19937_64(seed). decay >= 2.
SpectralState preset_random_smooth(const ModelParams& params, double theta0, std::uint64_t seed,
                                   double amplitude = 0.1, double decay = 2.0);

// X-norm of the data at t = 0 in the projection basis at a = theta_inf:
// max(|U_j(0)|_s, |theta_0 - theta_inf|).
double initial_x_norm(const SpectralState& state, const ModelParams& params);

// random-smooth rescaled so that initial_x_norm is `target` (to 1e-6 relative).
SpectralState preset_small_data(const ModelParams& params, double theta0, std::uint64_t seed,
                                double target = 1e-3, double decay = 2.0);

// Builds the preset named by [initial] preset = equilibrium | fourier | bump |
// random-smooth | small-data. `seed_override` replaces [initial] seed when set.
SpectralState preset_from_config(const Config& cfg, const ModelParams& params,
                                 const std::uint64_t* seed_override = nullptr);

// [model] section to ModelParams. grid_points defaults to max(4N, 2N + 1) and
// a to theta0 of [initial] when absent.
ModelParams params_from_config(const Config& cfg);

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::uint64_t bits);

}  // namespace heatstring

#include "heatstring/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "heatstring/config.hpp"
#include "heatstring/errors.hpp"
#include "heatstring/projections.hpp"

namespace heatstring {

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

SpectralState preset_equilibrium(const ModelParams& params, double theta0) {
  SpectralState st = SpectralState::zeros(params.n_modes);
  st.theta0 = theta0;
  return st;
}

SpectralState preset_fourier(const ModelParams& params, double theta0,
                             const std::vector<double>& u, const std::vector<double>& v,
                             const std::vector<double>& theta) {
  const auto n = static_cast<std::size_t>(params.n_modes);
  if (u.size() > n || v.size() > n || theta.size() > n) {
    throw DimensionError("fourier preset lists more coefficients than n_modes");
  }
  SpectralState st = preset_equilibrium(params, theta0);
  std::copy(u.begin(), u.end(), st.u.begin());
  std::copy(v.begin(), v.end(), st.v.begin());
  std::copy(theta.begin(), theta.end(), st.theta.begin());
  st.check(params);
  return st;
}

SpectralState preset_bump(const ModelParams& params, double theta0, double amplitude,
                          double center, double width) {
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  ModelParams fine = params;
  fine.grid_points = std::max(params.grid_points, 16 * params.n_modes);
  GridField f;
  f.x = uniform_grid(fine.grid_points);
  f.u.resize(f.x.size());
  f.u_t.assign(f.x.size(), 0.0);
  f.theta.resize(f.x.size());
  for (std::size_t j = 0; j < f.x.size(); ++j) {
    const double z = (f.x[j] - center) / width;
    const double b = amplitude * std::sin(f.x[j]) * std::exp(-z * z);
    f.u[j] = b;
    f.theta[j] = theta0 + b;
  }
  f.u.front() = f.u.back() = 0.0;
  return analyze(f, fine);
}

SpectralState preset_random_smooth(const ModelParams& params, double theta0, std::uint64_t seed,
                                   double amplitude, double decay) {
  if (decay < 2.0) throw DomainError("random-smooth decay exponent must be >= 2");
  std::mt19937_64 rng(seed);
  auto draw = [&rng]() { return 2.0 * unit_uniform(rng()) - 1.0; };
  SpectralState st = preset_equilibrium(params, theta0);
  for (int n = 1; n <= params.n_modes; ++n) {
    const double w = std::pow(static_cast<double>(n), -decay);
    st.u[n - 1] = amplitude * draw() * w / n;
    st.v[n - 1] = amplitude * draw() * w;
    st.theta[n - 1] = amplitude * draw() * w;
  }
  return st;
}

double initial_x_norm(const SpectralState& state, const ModelParams& params) {
  const double theta_inf = theta_infinity(state, params);
  ModelParams q = params;
  q.a = theta_inf;
  const ProjectionBasis basis = make_basis(q);
  ProjectionTrajectory tr;
  tr.times = {0.0};
  tr.states = {to_projection(state, q, basis)};
  return x_norm(tr, q.s, 0.0, theta_inf).x_norm;
}

SpectralState preset_small_data(const ModelParams& params, double theta0, std::uint64_t seed,
                                double target, double decay) {
  if (!(target > 0.0)) throw DomainError("small-data target must be positive");
  // The norm is linear in the amplitude up to the O(amplitude^2) shift of
  // theta_inf, so plain rescaling converges in a few rounds.
  double amplitude = 1.0;
  SpectralState st;
  for (int it = 0; it < 20; ++it) {
    st = preset_random_smooth(params, theta0, seed, amplitude, decay);
    const double x = initial_x_norm(st, params);
    if (std::abs(x - target) <= 1e-6 * target) break;
    amplitude *= target / x;
  }
  return st;
}

ModelParams params_from_config(const Config& cfg) {
  ModelParams p;
  p.mu = cfg.get_double("model", "mu", 1.0);
  p.n_modes = cfg.get_int("model", "n_modes", 16);
  p.s = cfg.get_double("model", "s", 0.8);
  p.grid_points = cfg.get_int("model", "grid_points", std::max(4 * p.n_modes, 2 * p.n_modes + 1));
  p.a = cfg.get_double("model", "a", cfg.get_double("initial", "theta0", 1.0));
  p.allow_any_s = cfg.get_bool("model", "allow_any_s", false);
  p.validate();
  return p;
}

SpectralState preset_from_config(const Config& cfg, const ModelParams& params,
                                 const std::uint64_t* seed_override) {
  const std::string name = cfg.get_string("initial", "preset", "random-smooth");
  const double theta0 = cfg.get_double("initial", "theta0", 1.0);
  const std::uint64_t seed =
      seed_override != nullptr ? *seed_override : cfg.get_u64("initial", "seed", 42);
  const double decay = cfg.get_double("initial", "decay", 2.0);
  if (name == "equilibrium") return preset_equilibrium(params, theta0);
  if (name == "fourier") {
    return preset_fourier(params, theta0, cfg.get_doubles("initial", "u"),
                          cfg.get_doubles("initial", "v"), cfg.get_doubles("initial", "theta"));
  }
  if (name == "bump") {
    return preset_bump(params, theta0, cfg.get_double("initial", "amplitude", 0.1),
                       cfg.get_double("initial", "center", std::numbers::pi / 2.0),
                       cfg.get_double("initial", "width", 0.5));
  }
  if (name == "random-smooth") {
    return preset_random_smooth(params, theta0, seed, cfg.get_double("initial", "amplitude", 0.1),
                                decay);
  }
  if (name == "small-data") {
    return preset_small_data(params, theta0, seed, cfg.get_double("initial", "x_norm", 1e-3),
                             decay);
  }
  throw DomainError("unknown preset '" + name +
                    "' (expected equilibrium, fourier, bump, random-smooth or small-data)");
}

}  // namespace heatstring

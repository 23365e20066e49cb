#include "heatstring/nonlinear_system.hpp"

#include <string>

#include "heatstring/convolution.hpp"
#include "heatstring/errors.hpp"

namespace heatstring {

std::vector<double> quadratic_coupling(const SpectralState& state, const ModelParams& params) {
  state.check(params);
  const int n_modes = params.n_modes;
  std::vector<double> kv(n_modes);
  for (int k = 1; k <= n_modes; ++k) kv[k - 1] = k * state.v[k - 1];

  const std::span<const double> th(state.theta), v(state.v), kvs(kv);
  const long terms = n_modes;
  std::vector<double> out(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    out[n - 1] = 0.5 * params.mu *
                 (conv_cauchy(th, kvs, n) + conv_tail_left(th, v, n, terms) +
                  conv_tail_right(th, v, n, terms));
  }
  return out;
}

RhsOutput rhs(const SpectralState& state, const ModelParams& params) {
  const std::vector<double> quad = quadratic_coupling(state, params);
  const int n_modes = params.n_modes;
  const double mu = params.mu;

  RhsOutput d;
  d.d_u = state.v;
  d.d_v.resize(n_modes);
  d.d_theta.resize(n_modes);
  double flux = 0.0;
  for (int n = 1; n <= n_modes; ++n) {
    const double u = state.u[n - 1], v = state.v[n - 1], th = state.theta[n - 1];
    d.d_v[n - 1] = -double(n) * n * u - mu * n * th;
    d.d_theta[n - 1] = -double(n) * n * th + quad[n - 1] + mu * state.theta0 * n * v;
    flux += th * n * v;
  }
  d.d_theta0 = 0.5 * mu * flux;
  return d;
}

RhsOutput rhs_linear(const SpectralState& state, const ModelParams& params) {
  state.check(params);
  const int n_modes = params.n_modes;
  const double mu = params.mu, a = params.a;
  RhsOutput d;
  d.d_u = state.v;
  d.d_v.resize(n_modes);
  d.d_theta.resize(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    const double nn = static_cast<double>(n) * n;
    d.d_v[n - 1] = -nn * state.u[n - 1] - mu * n * state.theta[n - 1];
    d.d_theta[n - 1] = -nn * state.theta[n - 1] + a * mu * n * state.v[n - 1];
  }
  return d;
}

std::vector<double> g3_all(const SpectralState& state, const ModelParams& params) {
  std::vector<double> g = quadratic_coupling(state, params);
  const double shift = params.mu * (state.theta0 - params.a);
  for (int n = 1; n <= params.n_modes; ++n) g[n - 1] += shift * n * state.v[n - 1];
  return g;
}

double g3(const SpectralState& state, const ModelParams& params, int n) {
  if (n < 1 || n > params.n_modes) {
    throw DomainError("g3 mode index " + std::to_string(n) + " outside 1.." +
                      std::to_string(params.n_modes));
  }
  state.check(params);
  std::vector<double> kv(params.n_modes);
  for (int k = 1; k <= params.n_modes; ++k) kv[k - 1] = k * state.v[k - 1];
  const std::span<const double> th(state.theta), v(state.v), kvs(kv);
  const long terms = params.n_modes;
  return 0.5 * params.mu *
             (conv_cauchy(th, kvs, n) + conv_tail_left(th, v, n, terms) +
              conv_tail_right(th, v, n, terms)) +
         params.mu * (state.theta0 - params.a) * n * state.v[n - 1];
}

}  // namespace heatstring

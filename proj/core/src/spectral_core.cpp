#include "heatstring/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heatstring/errors.hpp"

namespace heatstring {

namespace {

constexpr double kPi = std::numbers::pi;

// cos(k pi / M) and sin(k pi / M) for k = 0..2M-1, so that the product n*j can
// be reduced modulo 2M instead of calling the transcendental per sample.
struct TrigTable {
  explicit TrigTable(int m) : period(2 * m), cos_(period), sin_(period) {
    for (int k = 0; k < period; ++k) {
      const double angle = kPi * k / m;
      cos_[k] = std::cos(angle);
      sin_[k] = std::sin(angle);
    }
  }
  double cos(long n, long j) const { return cos_[(n * j) % period]; }
  double sin(long n, long j) const { return sin_[(n * j) % period]; }

  int period;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

}  // namespace

ModelParams ModelParams::make(double mu, double a, int n_modes, double s) {
  ModelParams p;
  p.mu = mu;
  p.a = a;
  p.n_modes = n_modes;
  p.s = s;
  p.grid_points = std::max(4 * n_modes, 2 * n_modes + 1);
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("a must be positive");
  if (n_modes < 1) throw DomainError("n_modes must be >= 1");
  if (grid_points < 2 * n_modes + 1) {
    throw AliasingError("grid_points = " + std::to_string(grid_points) +
                        " < 2N + 1 = " + std::to_string(2 * n_modes + 1));
  }
  if (!std::isfinite(s) || s < 0.0) throw DomainError("s must be a finite non-negative number");
  if (!allow_any_s && !(s > 0.75 && s < 1.0)) {
    throw DomainError("s = " + std::to_string(s) +
                      " outside (3/4, 1); set allow_any_s for diagnostic norms");
  }
}

SpectralState SpectralState::zeros(int n_modes) {
  SpectralState st;
  st.u.assign(n_modes, 0.0);
  st.v.assign(n_modes, 0.0);
  st.theta.assign(n_modes, 0.0);
  return st;
}

void SpectralState::check(const ModelParams& params) const {
  const auto n = static_cast<std::size_t>(params.n_modes);
  if (u.size() != n || v.size() != n || theta.size() != n) {
    throw DimensionError("state has (" + std::to_string(u.size()) + ", " +
                         std::to_string(v.size()) + ", " + std::to_string(theta.size()) +
                         ") coefficients, expected " + std::to_string(n));
  }
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::isfinite(theta0) || !std::all_of(u.begin(), u.end(), finite) ||
      !std::all_of(v.begin(), v.end(), finite) ||
      !std::all_of(theta.begin(), theta.end(), finite)) {
    throw DomainError("state contains non-finite coefficients");
  }
}

std::vector<double> uniform_grid(int grid_points) {
  std::vector<double> x(grid_points + 1);
  for (int j = 0; j <= grid_points; ++j) x[j] = kPi * j / grid_points;
  return x;
}

GridField synthesize(const SpectralState& state, const ModelParams& params) {
  params.validate();
  state.check(params);
  const int m = params.grid_points;
  const int n_modes = params.n_modes;
  const TrigTable trig(m);

  GridField f;
  f.x = uniform_grid(m);
  f.u.resize(m + 1);
  f.u_t.resize(m + 1);
  f.theta.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    double u = 0.0, ut = 0.0, th = state.theta0;
    for (int n = 1; n <= n_modes; ++n) {
      const double sn = trig.sin(n, j);
      u += state.u[n - 1] * sn;
      ut += state.v[n - 1] * sn;
      th += state.theta[n - 1] * trig.cos(n, j);
    }
    f.u[j] = u;
    f.u_t[j] = ut;
    f.theta[j] = th;
  }
  // Dirichlet ends are exact zeros, not sin(pi) round-off.
  f.u.front() = f.u.back() = 0.0;
  f.u_t.front() = f.u_t.back() = 0.0;
  return f;
}

SpectralState analyze(const GridField& field, const ModelParams& params) {
  params.validate();
  const int m = params.grid_points;
  const auto samples = static_cast<std::size_t>(m + 1);
  if (field.u.size() != samples || field.u_t.size() != samples ||
      field.theta.size() != samples) {
    throw DimensionError("grid field must have grid_points + 1 = " + std::to_string(m + 1) +
                         " samples per component");
  }
  const int n_modes = params.n_modes;
  const TrigTable trig(m);

  SpectralState st = SpectralState::zeros(n_modes);
  // Trapezoid weights: 1/2 at both ends, 1 inside.
  auto w = [m](int j) { return (j == 0 || j == m) ? 0.5 : 1.0; };

  double mean = 0.0;
  for (int j = 0; j <= m; ++j) mean += w(j) * field.theta[j];
  st.theta0 = mean / m;

  for (int n = 1; n <= n_modes; ++n) {
    double su = 0.0, sv = 0.0, sth = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double sn = trig.sin(n, j);
      su += w(j) * field.u[j] * sn;
      sv += w(j) * field.u_t[j] * sn;
      sth += w(j) * field.theta[j] * trig.cos(n, j);
    }
    st.u[n - 1] = 2.0 * su / m;
    st.v[n - 1] = 2.0 * sv / m;
    st.theta[n - 1] = 2.0 * sth / m;
  }
  return st;
}

double energy(const SpectralState& state, const ModelParams& params) {
  state.check(params);
  double kinetic = 0.0, elastic = 0.0;
  for (int n = 1; n <= params.n_modes; ++n) {
    const double v = state.v[n - 1];
    const double ux = n * state.u[n - 1];
    kinetic += v * v;
    elastic += ux * ux;
  }
  return 0.25 * kPi * (kinetic + elastic) + kPi * state.theta0;
}

double theta_infinity(const SpectralState& initial, const ModelParams& params) {
  return energy(initial, params) / kPi;
}

double hs_seminorm(std::span<const double> coeffs, double s) {
  if (!(s >= 0.0)) throw DomainError("hs_seminorm needs s >= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    acc += std::pow(n, 2.0 * s) * coeffs[i] * coeffs[i];
  }
  return std::sqrt(acc);
}

NormRecord norm_record(double t, const SpectralState& state, const ModelParams& params,
                       double theta_inf, bool with_min_theta) {
  NormRecord r;
  r.t = t;
  r.energy = energy(state, params);
  std::vector<double> ux(state.u.size());
  for (std::size_t i = 0; i < ux.size(); ++i) ux[i] = static_cast<double>(i + 1) * state.u[i];
  r.hs_u_x = hs_seminorm(ux, params.s);
  r.hs_u_t = hs_seminorm(state.v, params.s);
  r.hs_theta_dev = hs_seminorm(state.theta, params.s);
  r.theta0_dev = std::abs(state.theta0 - theta_inf);
  if (with_min_theta) {
    const GridField f = synthesize(state, params);
    r.min_theta = *std::min_element(f.theta.begin(), f.theta.end());
  } else {
    r.min_theta = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace heatstring

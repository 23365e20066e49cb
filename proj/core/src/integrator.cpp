#include "heatstring/integrator.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>
#include <string>

#include "heatstring/errors.hpp"
#include "heatstring/linear_spectral.hpp"
#include "heatstring/matrix_exp.hpp"
#include "heatstring/nonlinear_system.hpp"

namespace heatstring {

namespace {

void require_finite(const SpectralState& st) {
  if (!std::isfinite(st.theta0)) throw InstabilityError("theta_0 became non-finite");
  for (std::size_t i = 0; i < st.u.size(); ++i) {
    if (!std::isfinite(st.u[i]) || !std::isfinite(st.v[i]) || !std::isfinite(st.theta[i])) {
      throw InstabilityError("mode n = " + std::to_string(i + 1) + " became non-finite");
    }
  }
}

// x + c * d
SpectralState axpy(const SpectralState& x, double c, const RhsOutput& d) {
  SpectralState out = x;
  out.theta0 += c * d.d_theta0;
  for (std::size_t i = 0; i < x.u.size(); ++i) {
    out.u[i] += c * d.d_u[i];
    out.v[i] += c * d.d_v[i];
    out.theta[i] += c * d.d_theta[i];
  }
  return out;
}

double flux(const SpectralState& st, double mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < st.v.size(); ++i) {
    acc += st.theta[i] * static_cast<double>(i + 1) * st.v[i];
  }
  return 0.5 * mu * acc;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "etd_rk2") return Method::EtdRk2;
  if (name == "rk4") return Method::Rk4;
  throw DomainError("unknown integration method '" + name + "' (expected etd_rk2 or rk4)");
}

const char* method_name(Method m) { return m == Method::EtdRk2 ? "etd_rk2" : "rk4"; }

void IntegratorConfig::validate(const ModelParams& params) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be >= 0");
  if (record_every < 1) throw DomainError("record_every must be >= 1");
  if (state_every < 0) throw DomainError("state_every must be >= 0");
  const double nn = static_cast<double>(params.n_modes) * params.n_modes;
  if (method == Method::Rk4 && dt * nn > kRk4StabilityMargin) {
    throw StepSizeError("rk4 needs dt N^2 <= " + std::to_string(kRk4StabilityMargin) +
                        ", got " + std::to_string(dt * nn));
  }
}

EtdStepper::EtdStepper(const ModelParams& params, double dt, double a_ref, bool linearized)
    : params_(params), dt_(dt), a_ref_(a_ref), linearized_(linearized) {
  if (!(dt > 0.0)) throw StepSizeError("dt must be positive");
  params_.a = a_ref;
  const int n_modes = params.n_modes;
  exp_.resize(n_modes);
  w1_.resize(n_modes);
  w2_.resize(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    const Eigen::MatrixXd z = dt * build_A(n, params_);
    const PhiMatrices<Eigen::MatrixXd> phi = phi_matrices(z);
    exp_[n - 1] = phi.exp;
    w1_[n - 1] = dt * phi.phi1.col(2);
    w2_[n - 1] = dt * phi.phi2.col(2);
  }
}

SpectralState EtdStepper::step(const SpectralState& state) const {
  state.check(params_);
  const int n_modes = params_.n_modes;
  const double mu = params_.mu;

  if (linearized_) {
    SpectralState out = state;
    for (int n = 1; n <= n_modes; ++n) {
      const Eigen::Vector3d y(n * state.u[n - 1], state.v[n - 1], state.theta[n - 1]);
      const Eigen::Vector3d a = exp_[n - 1] * y;
      out.u[n - 1] = a(0) / n;
      out.v[n - 1] = a(1);
      out.theta[n - 1] = a(2);
    }
    require_finite(out);
    return out;
  }

  const std::vector<double> g0 = g3_all(state, params_);
  const double f0 = flux(state, mu);

  SpectralState mid = state;
  mid.theta0 = state.theta0 + dt_ * f0;
  for (int n = 1; n <= n_modes; ++n) {
    const Eigen::Vector3d y(n * state.u[n - 1], state.v[n - 1], state.theta[n - 1]);
    const Eigen::Vector3d a = exp_[n - 1] * y + w1_[n - 1] * g0[n - 1];
    mid.u[n - 1] = a(0) / n;
    mid.v[n - 1] = a(1);
    mid.theta[n - 1] = a(2);
  }

  const std::vector<double> g1 = g3_all(mid, params_);
  const double f1 = flux(mid, mu);

  SpectralState out = mid;
  out.theta0 = mid.theta0 + 0.5 * dt_ * (f1 - f0);
  for (int n = 1; n <= n_modes; ++n) {
    const double corr = g1[n - 1] - g0[n - 1];
    out.u[n - 1] += w2_[n - 1](0) * corr / n;
    out.v[n - 1] += w2_[n - 1](1) * corr;
    out.theta[n - 1] += w2_[n - 1](2) * corr;
  }
  require_finite(out);
  return out;
}

SpectralState step_etd(const SpectralState& state, const ModelParams& params, double dt) {
  const double a_ref = energy(state, params) / std::numbers::pi;
  return EtdStepper(params, dt, a_ref).step(state);
}

SpectralState step_rk4(const SpectralState& state, const ModelParams& params, double dt,
                       bool linearized) {
  auto f = [&](const SpectralState& x) {
    return linearized ? rhs_linear(x, params) : rhs(x, params);
  };
  const RhsOutput k1 = f(state);
  const RhsOutput k2 = f(axpy(state, 0.5 * dt, k1));
  const RhsOutput k3 = f(axpy(state, 0.5 * dt, k2));
  const RhsOutput k4 = f(axpy(state, dt, k3));
  SpectralState out = state;
  const double c = dt / 6.0;
  out.theta0 += c * (k1.d_theta0 + 2.0 * k2.d_theta0 + 2.0 * k3.d_theta0 + k4.d_theta0);
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    out.u[i] += c * (k1.d_u[i] + 2.0 * k2.d_u[i] + 2.0 * k3.d_u[i] + k4.d_u[i]);
    out.v[i] += c * (k1.d_v[i] + 2.0 * k2.d_v[i] + 2.0 * k3.d_v[i] + k4.d_v[i]);
    out.theta[i] += c * (k1.d_theta[i] + 2.0 * k2.d_theta[i] + 2.0 * k3.d_theta[i] + k4.d_theta[i]);
  }
  require_finite(out);
  return out;
}

TrajectoryRecord run(const SpectralState& initial, const ModelParams& params,
                     const IntegratorConfig& config) {
  params.validate();
  initial.check(params);
  config.validate(params);

  TrajectoryRecord rec;
  rec.energy0 = energy(initial, params);
  rec.theta_inf = rec.energy0 / std::numbers::pi;
  rec.linearized = config.linearized;

  long steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
  if (steps < 0) steps = 0;
  const double dt = steps > 0 ? config.t_end / static_cast<double>(steps) : config.dt;

  ModelParams linear_params = params;
  linear_params.a = rec.theta_inf;
  std::unique_ptr<EtdStepper> etd;
  if (config.method == Method::EtdRk2) {
    etd = std::make_unique<EtdStepper>(params, dt, rec.theta_inf, config.linearized);
  }

  long record_index = 0;
  auto record = [&](double t, const SpectralState& st, bool force_state) {
    rec.times.push_back(t);
    rec.norms.push_back(norm_record(t, st, params, rec.theta_inf, config.with_min_theta));
    const bool keep = force_state ||
                      (config.state_every > 0 && record_index % config.state_every == 0);
    if (keep) {
      rec.state_times.push_back(t);
      rec.states.push_back(st);
    }
    ++record_index;
  };

  SpectralState state = initial;
  record(0.0, state, true);
  for (long s = 1; s <= steps; ++s) {
    state = etd ? etd->step(state) : step_rk4(state, linear_params, dt, config.linearized);
    const bool last = (s == steps);
    if (s % config.record_every == 0 || last) {
      record(static_cast<double>(s) * dt, state, last);
    }
  }
  return rec;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj) {
  os << "t,energy,hs_u_x,hs_u_t,hs_theta_dev,theta0_dev,min_theta\n";
  os << std::setprecision(17);
  for (const NormRecord& r : traj.norms) {
    os << r.t << ',' << r.energy << ',' << r.hs_u_x << ',' << r.hs_u_t << ',' << r.hs_theta_dev
       << ',' << r.theta0_dev << ',' << r.min_theta << '\n';
  }
}

}  // namespace heatstring

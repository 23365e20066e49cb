#include "heatstring/projections.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>

#include "heatstring/convolution.hpp"
#include "heatstring/errors.hpp"
#include "heatstring/linear_spectral.hpp"
#include "heatstring/matrix_exp.hpp"
#include "heatstring/nonlinear_system.hpp"

namespace heatstring {

namespace {

// Projected forcing from the state coordinates y = (n u_n, v_n, theta_n) and g3.
Eigen::Vector3cd forcing_from(int n, double a, double mu, const Eigen::Vector3cd& y, cplx g) {
  const double dn = n, nn = dn * dn;
  const double am2 = a * mu * mu;
  const double mu3 = mu * mu * mu;
  Eigen::Vector3cd f;
  f(0) = (a * a * mu3 / nn) * y(0) - (a * mu / dn) * y(1) + (a * a * mu * mu3 / nn) * y(2) +
         (1.0 - am2 / nn) * g;
  const double v_coef = am2 / dn - am2 * am2 / (4.0 * dn);
  const double th_re = a * mu3 / (2.0 * nn) - a * a * mu * mu * mu3 / (4.0 * nn);
  const double th_im = mu / dn - a * mu3 / dn;
  const double g_re = mu / nn - a * mu3 / (2.0 * nn);
  const double g_im = mu / dn;
  f(1) = v_coef * y(1) + cplx(th_re, th_im) * y(2) + cplx(g_re, -g_im) * g;
  f(2) = v_coef * y(1) + cplx(th_re, -th_im) * y(2) + cplx(g_re, g_im) * g;
  return f;
}

Eigen::Vector3cd state_coords(const SpectralState& st, int n) {
  return Eigen::Vector3cd(static_cast<double>(n) * st.u[n - 1], st.v[n - 1], st.theta[n - 1]);
}

void check_basis(const ProjectionBasis& basis, int n_modes) {
  if (static_cast<int>(basis.modes.size()) != n_modes) {
    throw DimensionError("projection basis has " + std::to_string(basis.modes.size()) +
                         " modes, expected " + std::to_string(n_modes));
  }
}

void check_projection_state(const ProjectionState& ps, int n_modes) {
  const auto n = static_cast<std::size_t>(n_modes);
  if (ps.U1.size() != n || ps.U2.size() != n || ps.U3.size() != n) {
    throw DimensionError("projection state length does not match n_modes = " +
                         std::to_string(n_modes));
  }
}

// Quadratic forcing g3 and the flux sum_l a3_l l a2_l on complex coordinates.
struct Coupling {
  std::vector<cplx> g3;
  cplx flux;
};

Coupling coupling(const std::vector<Eigen::Vector3cd>& y, double h_theta0, double theta_inf,
                  double mu, bool linear_only) {
  const int n_modes = static_cast<int>(y.size());
  Coupling c;
  c.g3.assign(n_modes, cplx(0.0));
  c.flux = 0.0;
  if (linear_only) return c;

  std::vector<cplx> a2(n_modes), a3(n_modes), ka2(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    a2[n - 1] = y[n - 1](1);
    a3[n - 1] = y[n - 1](2);
    ka2[n - 1] = static_cast<double>(n) * a2[n - 1];
  }
  const std::span<const cplx> s2(a2), s3(a3), sk2(ka2);
  const long terms = n_modes;
  for (int n = 1; n <= n_modes; ++n) {
    c.g3[n - 1] = 0.5 * mu *
                      (conv_cauchy(s3, sk2, n) + conv_tail_left(s3, s2, n, terms) +
                       conv_tail_right(s3, s2, n, terms)) +
                  mu * (h_theta0 - theta_inf) * static_cast<double>(n) * a2[n - 1];
    c.flux += a3[n - 1] * ka2[n - 1];
  }
  return c;
}

double uniform_step(const std::vector<double>& times) {
  if (times.size() < 2) return 0.0;
  const double h = times[1] - times[0];
  if (!(h > 0.0)) throw StepSizeError("time grid must be strictly increasing");
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double hk = times[k] - times[k - 1];
    if (std::abs(hk - h) > 1e-9 * h) throw StepSizeError("time grid must be uniform");
  }
  return h;
}

}  // namespace

const char* basis_kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::Asymptotic:
      return "asymptotic";
    case BasisKind::Eigen:
      return "eigen";
    case BasisKind::Identity:
      return "identity";
  }
  return "unknown";
}

ProjectionBasis make_basis(const ModelParams& params, int n_split, double max_condition) {
  ProjectionBasis basis;
  basis.n_split = n_split > 0 ? n_split : separation_threshold(params);
  basis.modes.resize(params.n_modes);
  for (int n = 1; n <= params.n_modes; ++n) {
    ModeBasis& mb = basis.modes[n - 1];
    if (n >= basis.n_split) {
      const SimilarityTriple st = similarity(n, params);
      mb.B = st.C.transpose();
      mb.B_inv = st.C_inv.transpose();
      mb.kind = BasisKind::Asymptotic;
      continue;
    }
    const EigenSystem es = eigen_exact(n, params);
    if (!es.degenerate && es.condition <= max_condition) {
      for (int j = 0; j < 3; ++j) mb.B.row(j) = es.vectors[j].transpose();
      mb.B_inv = mb.B.inverse();
      mb.kind = BasisKind::Eigen;
    } else {
      mb.B.setIdentity();
      mb.B_inv.setIdentity();
      mb.kind = BasisKind::Identity;
    }
  }
  return basis;
}

ProjectionBasis asymptotic_basis(const ModelParams& params) {
  return make_basis(params, 1);
}

ProjectionState ProjectionState::zeros(int n_modes) {
  ProjectionState ps;
  ps.U1.assign(n_modes, cplx(0.0));
  ps.U2.assign(n_modes, cplx(0.0));
  ps.U3.assign(n_modes, cplx(0.0));
  return ps;
}

ProjectionState to_projection(const SpectralState& state, const ModelParams& params,
                              const ProjectionBasis& basis) {
  state.check(params);
  check_basis(basis, params.n_modes);
  ProjectionState ps = ProjectionState::zeros(params.n_modes);
  ps.theta0 = state.theta0;
  for (int n = 1; n <= params.n_modes; ++n) {
    const Eigen::Vector3cd u = basis.modes[n - 1].B * state_coords(state, n);
    ps.U1[n - 1] = u(0);
    ps.U2[n - 1] = u(1);
    ps.U3[n - 1] = u(2);
  }
  return ps;
}

std::vector<Eigen::Vector3cd> projection_coordinates(const ProjectionState& ps,
                                                     const ProjectionBasis& basis) {
  const int n_modes = ps.modes();
  check_basis(basis, n_modes);
  check_projection_state(ps, n_modes);
  std::vector<Eigen::Vector3cd> y(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    y[n - 1] = basis.modes[n - 1].B_inv *
               Eigen::Vector3cd(ps.U1[n - 1], ps.U2[n - 1], ps.U3[n - 1]);
  }
  return y;
}

SpectralState from_projection(const ProjectionState& ps, const ModelParams& params,
                              const ProjectionBasis& basis, double* imag_defect) {
  check_projection_state(ps, params.n_modes);
  const std::vector<Eigen::Vector3cd> y = projection_coordinates(ps, basis);
  SpectralState st = SpectralState::zeros(params.n_modes);
  st.theta0 = ps.theta0;
  double max_im = 0.0, max_re = 0.0;
  for (int n = 1; n <= params.n_modes; ++n) {
    const Eigen::Vector3cd& c = y[n - 1];
    st.u[n - 1] = c(0).real() / n;
    st.v[n - 1] = c(1).real();
    st.theta[n - 1] = c(2).real();
    for (int j = 0; j < 3; ++j) {
      max_im = std::max(max_im, std::abs(c(j).imag()));
      max_re = std::max(max_re, std::abs(c(j).real()));
    }
  }
  if (imag_defect != nullptr) *imag_defect = max_im / (max_re + 1e-300);
  return st;
}

Eigen::Vector3cd forcing_F(const SpectralState& state, const ModelParams& params, int n) {
  const double g = g3(state, params, n);
  return forcing_from(n, params.a, params.mu, state_coords(state, n), cplx(g));
}

Eigen::Vector3cd projected_rates(int n, const ModelParams& params) {
  const double dn = n;
  const double am2 = params.a * params.mu * params.mu;
  return Eigen::Vector3cd(cplx(-dn * dn + am2, 0.0), cplx(-am2 / 2.0, -dn),
                          cplx(-am2 / 2.0, dn));
}

ProjectionTrajectory constant_trajectory(const ProjectionState& ps, double t_end, double h) {
  if (!(h > 0.0) || !(t_end >= 0.0)) throw StepSizeError("need h > 0 and t_end >= 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  if (std::abs(static_cast<double>(steps) * h - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw StepSizeError("t_end must be an integer multiple of h");
  }
  ProjectionTrajectory tr;
  tr.times.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) tr.times[k] = static_cast<double>(k) * h;
  tr.states.assign(steps + 1, ps);
  return tr;
}

ProjectionTrajectory duhamel_map(const ProjectionTrajectory& input, const ProjectionState& initial,
                                 const ModelParams& params, const ProjectionBasis& basis,
                                 double theta_inf, const DuhamelOptions& opts) {
  const std::size_t steps = input.times.size();
  if (steps == 0 || input.states.size() != steps) {
    throw DimensionError("trajectory needs matching, non-empty times and states");
  }
  const int n_modes = params.n_modes;
  check_basis(basis, n_modes);
  check_projection_state(initial, n_modes);
  for (const auto& s : input.states) check_projection_state(s, n_modes);
  const double h = uniform_step(input.times);
  if (h * n_modes * n_modes > opts.max_stiffness) {
    throw StepSizeError("h * N^2 = " + std::to_string(h * n_modes * n_modes) + " exceeds " +
                        std::to_string(opts.max_stiffness));
  }

  ModelParams q = params;
  q.a = theta_inf;
  const double mu = q.mu;

  // Forcing along the input trajectory.
  std::vector<std::vector<Eigen::Vector3cd>> coords(steps);
  std::vector<Coupling> forcing(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    coords[k] = projection_coordinates(input.states[k], basis);
    forcing[k] = coupling(coords[k], input.states[k].theta0, theta_inf, mu, opts.linear_only);
  }

  ProjectionTrajectory out;
  out.times = input.times;
  out.states.assign(steps, ProjectionState::zeros(n_modes));
  out.states[0] = initial;

  // theta_0: trapezoid on the flux, which is linear between grid points.
  for (std::size_t k = 1; k < steps; ++k) {
    const cplx inc = 0.25 * mu * h * (forcing[k - 1].flux + forcing[k].flux);
    out.states[k].theta0 = out.states[k - 1].theta0 + inc.real();
  }

  for (int n = 1; n <= n_modes; ++n) {
    const ModeBasis& mb = basis.modes[n - 1];
    const Eigen::Vector3cd u0(initial.U1[n - 1], initial.U2[n - 1], initial.U3[n - 1]);

    if (n >= basis.n_split) {
      if (mb.kind != BasisKind::Asymptotic) {
        throw DomainError("modes at or above n_split need the asymptotic basis");
      }
      const Eigen::Vector3cd rates = projected_rates(n, q);
      Eigen::Vector3cd decay, w0, w1;
      for (int j = 0; j < 3; ++j) {
        const cplx z = rates(j) * h;
        decay(j) = std::exp(z);
        w1(j) = h * phi2(z);
        w0(j) = h * phi1(z) - w1(j);
      }
      Eigen::Vector3cd psi = u0;
      Eigen::Vector3cd f_prev =
          forcing_from(n, theta_inf, mu, coords[0][n - 1], forcing[0].g3[n - 1]);
      for (std::size_t k = 1; k < steps; ++k) {
        const Eigen::Vector3cd f_next =
            forcing_from(n, theta_inf, mu, coords[k][n - 1], forcing[k].g3[n - 1]);
        psi = decay.cwiseProduct(psi) + w0.cwiseProduct(f_prev) + w1.cwiseProduct(f_next);
        out.states[k].U1[n - 1] = psi(0);
        out.states[k].U2[n - 1] = psi(1);
        out.states[k].U3[n - 1] = psi(2);
        f_prev = f_next;
      }
    } else {
      const Eigen::MatrixXcd z = (h * build_A(n, q)).cast<cplx>();
      const PhiMatrices<Eigen::MatrixXcd> phi = phi_matrices(z);
      const Eigen::Matrix3cd e = phi.exp;
      const Eigen::Vector3cd w1 = h * phi.phi2.col(2);
      const Eigen::Vector3cd w0 = h * phi.phi1.col(2) - w1;
      Eigen::Vector3cd y = mb.B_inv * u0;
      for (std::size_t k = 1; k < steps; ++k) {
        y = e * y + w0 * forcing[k - 1].g3[n - 1] + w1 * forcing[k].g3[n - 1];
        const Eigen::Vector3cd psi = mb.B * y;
        out.states[k].U1[n - 1] = psi(0);
        out.states[k].U2[n - 1] = psi(1);
        out.states[k].U3[n - 1] = psi(2);
      }
    }
  }
  return out;
}

double seq_norm_s(const std::vector<double>& times, const std::vector<std::vector<cplx>>& series,
                  double s, double alpha) {
  if (series.size() != times.size()) throw DimensionError("series and times differ in length");
  if (series.empty()) return 0.0;
  const std::size_t n_modes = series.front().size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n_modes; ++i) {
    double sup = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (series[k].size() != n_modes) throw DimensionError("ragged series");
      sup = std::max(sup, std::exp(alpha * times[k]) * std::abs(series[k][i]));
    }
    acc += std::pow(static_cast<double>(i + 1), 2.0 * s) * sup * sup;
  }
  return std::sqrt(acc);
}

namespace {

XNormReport x_norm_impl(const ProjectionTrajectory& a, const ProjectionTrajectory* b, double s,
                        double alpha, double theta_ref) {
  const std::size_t steps = a.times.size();
  if (a.states.size() != steps || (b != nullptr && b->states.size() != steps)) {
    throw DimensionError("trajectories must share one time grid");
  }
  std::array<std::vector<std::vector<cplx>>, 3> series;
  for (auto& s_j : series) s_j.resize(steps);
  XNormReport r;
  for (std::size_t k = 0; k < steps; ++k) {
    const ProjectionState& x = a.states[k];
    const int n_modes = x.modes();
    for (int j = 0; j < 3; ++j) series[j][k].resize(n_modes);
    for (int n = 0; n < n_modes; ++n) {
      series[0][k][n] = x.U1[n];
      series[1][k][n] = x.U2[n];
      series[2][k][n] = x.U3[n];
      if (b != nullptr) {
        series[0][k][n] -= b->states[k].U1.at(n);
        series[1][k][n] -= b->states[k].U2.at(n);
        series[2][k][n] -= b->states[k].U3.at(n);
      }
    }
    const double ref = (b != nullptr) ? b->states[k].theta0 : theta_ref;
    r.sup_theta0_dev = std::max(r.sup_theta0_dev, std::abs(x.theta0 - ref));
  }
  r.norm_U1_s = seq_norm_s(a.times, series[0], s, alpha);
  r.norm_U2_s = seq_norm_s(a.times, series[1], s, alpha);
  r.norm_U3_s = seq_norm_s(a.times, series[2], s, alpha);
  r.x_norm = std::max({r.norm_U1_s, r.norm_U2_s, r.norm_U3_s, r.sup_theta0_dev});
  return r;
}

}  // namespace

XNormReport x_norm(const ProjectionTrajectory& traj, double s, double alpha, double theta_ref) {
  return x_norm_impl(traj, nullptr, s, alpha, theta_ref);
}

double x_distance(const ProjectionTrajectory& a, const ProjectionTrajectory& b, double s,
                  double alpha) {
  return x_norm_impl(a, &b, s, alpha, 0.0).x_norm;
}

FixedPointResult fixed_point_solve(const ProjectionState& initial, const ModelParams& params,
                                   const ProjectionBasis& basis, double theta_inf, double t_end,
                                   double h, const FixedPointOptions& opts) {
  FixedPointResult res;
  res.trajectory = constant_trajectory(initial, t_end, h);
  {
    ProjectionTrajectory at_zero;
    at_zero.times = {0.0};
    at_zero.states = {initial};
    res.initial_x_norm = x_norm(at_zero, params.s, 0.0, theta_inf).x_norm;
  }

  int above_one = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    ProjectionTrajectory next =
        duhamel_map(res.trajectory, initial, params, basis, theta_inf, opts.duhamel);
    const double diff = x_distance(next, res.trajectory, params.s, opts.alpha);
    const double ratio = res.differences.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                 : diff / res.differences.back();
    res.differences.push_back(diff);
    res.ratios.push_back(ratio);
    res.trajectory = std::move(next);
    res.iterations = it;
    if (!std::isfinite(diff)) {
      throw DivergenceError("Picard iterate " + std::to_string(it) + " is not finite");
    }
    if (diff < opts.tol) {
      res.converged = true;
      break;
    }
    above_one = (ratio >= 1.0) ? above_one + 1 : 0;
    if (above_one >= 3) {
      throw DivergenceError("Picard iteration not contracting: ratio " + std::to_string(ratio) +
                            " >= 1 for 3 consecutive steps at iteration " + std::to_string(it) +
                            ", difference " + std::to_string(diff));
    }
  }
  return res;
}

void write_iteration_log_csv(std::ostream& os, const FixedPointResult& result) {
  os << "iteration,x_norm_difference,contraction_ratio\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < result.differences.size(); ++k) {
    os << (k + 1) << ',' << result.differences[k] << ',' << result.ratios[k] << '\n';
  }
}

SupBound duhamel_sup_bound_check(const std::vector<double>& times, const std::vector<double>& f,
                                 double beta, double gamma) {
  if (!(beta > gamma)) throw DomainError("need beta > gamma");
  if (times.size() != f.size()) throw DimensionError("times and samples differ in length");
  SupBound out;
  if (times.empty()) return out;

  // Right side: sup of e^{gamma t} (p + q t) over each interval, checking the
  // interior stationary point t* = -1/gamma - p/q.
  auto weighted = [gamma](double t, double value) { return std::exp(gamma * t) * value; };
  double sup_f = weighted(times[0], std::abs(f[0]));
  double g = 0.0;
  double lhs = weighted(times[0], g);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double t0 = times[k - 1], t1 = times[k];
    const double h = t1 - t0;
    if (!(h > 0.0)) throw DomainError("times must be strictly increasing");
    const double f0 = std::abs(f[k - 1]), f1 = std::abs(f[k]);
    sup_f = std::max(sup_f, weighted(t1, f1));
    const double slope = (f1 - f0) / h;
    if (gamma != 0.0 && slope != 0.0) {
      const double t_star = t0 - 1.0 / gamma - f0 / slope;
      if (t_star > t0 && t_star < t1) {
        sup_f = std::max(sup_f, weighted(t_star, f0 + slope * (t_star - t0)));
      }
    }
    const double z = -beta * h;
    const double w1 = h * phi2(z);
    const double w0 = h * phi1(z) - w1;
    g = std::exp(z) * g + w0 * f0 + w1 * f1;
    lhs = std::max(lhs, weighted(t1, g));
  }
  out.lhs = lhs;
  out.rhs = sup_f / (beta - gamma);
  return out;
}

}  // namespace heatstring

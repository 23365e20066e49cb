#pragma once

// Projection coordinates U_n = B_n (n u_n, v_n, theta_n)^T, the projected
// forcing, and the Duhamel map whose fixed point is the trajectory.
//
// For n >= n_split the basis is B_n = C_n^T built from the leading-order
// eigenvectors of A*_{n,a}; the dynamics are then three scalar equations
//   U_1' = (-n^2 + a mu^2) U_1 + F_1,  U_2' = (-n i - a mu^2/2) U_2 + F_2,  U_3 = conj.
// Below n_split the basis rows are exact A* eigenvectors when they are well
// conditioned and the identity otherwise; the Duhamel step there uses the
// full 3x3 matrix exponential, so diagonalizability is never assumed.

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "heatstring/spectral_core.hpp"

namespace heatstring {

using cplx = std::complex<double>;

enum class BasisKind { Asymptotic, Eigen, Identity };

const char* basis_kind_name(BasisKind k);

struct ModeBasis {
  Eigen::Matrix3cd B;
  Eigen::Matrix3cd B_inv;
  BasisKind kind = BasisKind::Identity;
};

struct ProjectionBasis {
  int n_split = 1;
  std::vector<ModeBasis> modes;  // modes[n - 1]
};

// n_split <= 0 selects the Gershgorin separation threshold for params.
// Eigen bases with condition number above max_condition fall back to identity.
ProjectionBasis make_basis(const ModelParams& params, int n_split = 0,
                           double max_condition = 1e8);

// Asymptotic basis C_n^T on every mode, for checking the projected dynamics.
ProjectionBasis asymptotic_basis(const ModelParams& params);

struct ProjectionState {
  double theta0 = 0.0;
  std::vector<cplx> U1, U2, U3;

  static ProjectionState zeros(int n_modes);
  int modes() const noexcept { return static_cast<int>(U1.size()); }
};

ProjectionState to_projection(const SpectralState& state, const ModelParams& params,
                              const ProjectionBasis& basis);

// Real parts of B_n^{-1} U_n. The discarded imaginary parts are reported
// through imag_defect (max |Im| over |Re| + tiny) when non-null.
SpectralState from_projection(const ProjectionState& ps, const ModelParams& params,
                              const ProjectionBasis& basis, double* imag_defect = nullptr);

// Complex coordinates (n u_n, v_n, theta_n) = B_n^{-1} U_n, without taking real parts.
std::vector<Eigen::Vector3cd> projection_coordinates(const ProjectionState& ps,
                                                     const ProjectionBasis& basis);

// The three projected forcing terms at mode n with a = params.a.
Eigen::Vector3cd forcing_F(const SpectralState& state, const ModelParams& params, int n);

// Diagonal growth rates (-n^2 + a mu^2, -n i - a mu^2/2, n i - a mu^2/2).
Eigen::Vector3cd projected_rates(int n, const ModelParams& params);

struct ProjectionTrajectory {
  std::vector<double> times;  // uniform grid starting at 0
  std::vector<ProjectionState> states;
};

// Constant trajectory on [0, t_end] with steps of size h.
ProjectionTrajectory constant_trajectory(const ProjectionState& ps, double t_end, double h);

struct DuhamelOptions {
  // Largest admissible h * N^2. Past this the piecewise-linear forcing model
  // under-resolves the fastest heat mode.
  double max_stiffness = 16.0;
  // Drop the quadratic convolutions, keeping only the terms linear in the state.
  bool linear_only = false;
};

// One application of the Duhamel map to `input`, started from `initial`.
// params.a must be theta_inf. Integrals use exact exponential weights against
// the piecewise-linear interpolant of the forcing on the time grid.
ProjectionTrajectory duhamel_map(const ProjectionTrajectory& input, const ProjectionState& initial,
                                 const ModelParams& params, const ProjectionBasis& basis,
                                 double theta_inf, const DuhamelOptions& opts = {});

struct XNormReport {
  double norm_U1_s = 0.0;
  double norm_U2_s = 0.0;
  double norm_U3_s = 0.0;
  double sup_theta0_dev = 0.0;
  double x_norm = 0.0;
};

// |z|_s = (sum_n n^{2s} max_t e^{2 alpha t} |z_n(t)|^2)^{1/2}; series[k][n-1] is z_n(times[k]).
double seq_norm_s(const std::vector<double>& times, const std::vector<std::vector<cplx>>& series,
                  double s, double alpha);

XNormReport x_norm(const ProjectionTrajectory& traj, double s, double alpha, double theta_ref);

// X-norm of the difference of two trajectories on the same grid.
double x_distance(const ProjectionTrajectory& a, const ProjectionTrajectory& b, double s,
                  double alpha);

struct FixedPointOptions {
  double tol = 1e-12;
  int max_iterations = 200;
  double alpha = 0.0;  // time weight in the X-norm
  DuhamelOptions duhamel;
};

struct FixedPointResult {
  ProjectionTrajectory trajectory;
  int iterations = 0;
  bool converged = false;
  std::vector<double> differences;  // ||Psi^{k+1} - Psi^k||_X
  std::vector<double> ratios;       // differences[k] / differences[k-1], NaN for k = 0
  double initial_x_norm = 0.0;      // X-norm of the data against theta_inf
};

// Picard iteration from the constant trajectory. DivergenceError after three
// consecutive ratios >= 1.
FixedPointResult fixed_point_solve(const ProjectionState& initial, const ModelParams& params,
                                   const ProjectionBasis& basis, double theta_inf, double t_end,
                                   double h, const FixedPointOptions& opts = {});

void write_iteration_log_csv(std::ostream& os, const FixedPointResult& result);

struct SupBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Both sides of
//   sup_t e^{gamma t} int_0^t e^{-beta (t - s)} |f(s)| ds <= sup_t e^{gamma t} |f(t)| / (beta - gamma)
// for f sampled at `times` and interpolated linearly in |f|. The integral is
// exact for the interpolant and the right-hand sup is exact over each interval.
SupBound duhamel_sup_bound_check(const std::vector<double>& times, const std::vector<double>& f,
                                 double beta, double gamma);

}  // namespace heatstring

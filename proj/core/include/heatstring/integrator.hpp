#pragma once

// Time stepping for the truncated system.
//
// etd_rk2 treats the per-mode linear block A_{n,a_ref} (a_ref = theta_inf of
// the initial state) exactly through 3x3 matrix exponentials, so the -n^2 heat
// decay and the +-n i oscillation carry no step-size restriction. The
// remainder is g3 relative to a_ref plus the theta_0 flux, integrated with the
// Cox-Matthews second-order scheme. rk4 is classical and needs dt N^2 <= 2.5.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heatstring/spectral_core.hpp"

namespace heatstring {

enum class Method { EtdRk2, Rk4 };

Method parse_method(const std::string& name);
const char* method_name(Method m);

// Largest dt N^2 accepted for rk4.
inline constexpr double kRk4StabilityMargin = 2.5;

struct IntegratorConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  Method method = Method::EtdRk2;
  int record_every = 1;    // steps between norm records
  int state_every = 0;     // records between stored states; 0 stores only the endpoints
  bool with_min_theta = true;
  // Integrate the linearization about a = theta_inf instead: quadratic sums
  // dropped and theta_0 frozen.
  bool linearized = false;

  void validate(const ModelParams& params) const;
};

struct TrajectoryRecord {
  double theta_inf = 0.0;
  double energy0 = 0.0;
  bool linearized = false;  // energy is not an invariant of the linearized flow
  std::vector<double> times;  // one per norm record
  std::vector<NormRecord> norms;
  std::vector<double> state_times;
  std::vector<SpectralState> states;
};

class EtdStepper {
 public:
  EtdStepper(const ModelParams& params, double dt, double a_ref, bool linearized = false);

  SpectralState step(const SpectralState& state) const;
  double dt() const noexcept { return dt_; }
  double a_ref() const noexcept { return a_ref_; }

 private:
  ModelParams params_;
  double dt_;
  double a_ref_;
  bool linearized_;
  std::vector<Eigen::Matrix3d> exp_;   // e^{dt A_n}
  std::vector<Eigen::Vector3d> w1_;    // dt phi1(dt A_n) e_3
  std::vector<Eigen::Vector3d> w2_;    // dt phi2(dt A_n) e_3
};

// One etd_rk2 step with a_ref = theta_inf of `state`.
SpectralState step_etd(const SpectralState& state, const ModelParams& params, double dt);

// One classical RK4 step (no stability check). With `linearized` the step
// integrates the linearization about params.a.
SpectralState step_rk4(const SpectralState& state, const ModelParams& params, double dt,
                       bool linearized = false);

// The step count is ceil(t_end / dt); dt is shrunk so the last step lands on t_end.
TrajectoryRecord run(const SpectralState& initial, const ModelParams& params,
                     const IntegratorConfig& config);

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj);

}  // namespace heatstring

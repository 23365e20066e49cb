#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "heatstring/analysis.hpp"
#include "heatstring/config.hpp"
#include "heatstring/errors.hpp"
#include "heatstring/integrator.hpp"
#include "heatstring/linear_spectral.hpp"
#include "heatstring/presets.hpp"
#include "heatstring/projections.hpp"
#include "heatstring/spectral_core.hpp"

namespace heatstring::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Configuration mistakes found while setting up a command map to exit 1;
// anything thrown once the computation has started maps to exit 2.
struct SetupError : Error {
  using Error::Error;
};

struct Context {
  const CommandOptions& opts;
  const Config& cfg;
  std::ostream& out;
  std::ostream& err;
  fs::path out_dir;
};

// Non-finite values are written as null so the reports stay valid JSON.
ordered_json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

// Runs a setup step, reporting its domain errors as configuration errors.
template <typename F>
auto setup(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw SetupError(e.what());
  }
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

IntegratorConfig integrator_from_config(const Config& cfg, double t_end_default,
                                        double dt_default) {
  IntegratorConfig ic;
  ic.t_end = cfg.get_double("integrator", "t_end", t_end_default);
  ic.dt = cfg.get_double("integrator", "dt", dt_default);
  ic.method = parse_method(cfg.get_string("integrator", "method", "etd_rk2"));
  ic.record_every = cfg.get_int("integrator", "record_every", 1);
  ic.state_every = cfg.get_int("integrator", "state_every", 0);
  ic.with_min_theta = cfg.get_bool("integrator", "min_theta", true);
  ic.linearized = cfg.get_bool("integrator", "linearized", false);
  return ic;
}

// Model parameters with a set to theta_inf of the initial state.
ModelParams at_theta_inf(const ModelParams& params, double theta_inf) {
  ModelParams q = params;
  q.a = theta_inf;
  return q;
}

ordered_json params_json(const ModelParams& p) {
  return {{"mu", p.mu}, {"a", p.a}, {"n_modes", p.n_modes}, {"s", p.s},
          {"grid_points", p.grid_points}};
}

ordered_json preset_json(const Config& cfg, const CommandOptions& opts) {
  ordered_json j;
  j["preset"] = cfg.get_string("initial", "preset", "random-smooth");
  j["seed"] = opts.seed ? *opts.seed : cfg.get_u64("initial", "seed", 42);
  j["note"] = "initial data is a built-in preset, not a canonical test case";
  return j;
}

SpectralState initial_state(const Context& ctx, const ModelParams& params) {
  const std::uint64_t* seed = ctx.opts.seed ? &*ctx.opts.seed : nullptr;
  return preset_from_config(ctx.cfg, params, seed);
}

int cmd_simulate(Context& ctx) {
  const ModelParams params = setup([&] { return params_from_config(ctx.cfg); });
  const SpectralState init = setup([&] { return initial_state(ctx, params); });
  const IntegratorConfig ic = setup([&] {
    IntegratorConfig c = integrator_from_config(ctx.cfg, 1.0, 1e-3);
    c.validate(params);
    return c;
  });

  const TrajectoryRecord traj = run(init, params, ic);
  auto os = open_csv(ctx.out_dir / "trajectory.csv");
  write_trajectory_csv(os, traj);

  double drift = 0.0;
  for (const NormRecord& r : traj.norms) drift = std::max(drift, std::abs(r.energy - traj.energy0));
  ctx.out << "simulate: " << traj.norms.size() << " records to "
          << (ctx.out_dir / "trajectory.csv").string() << '\n'
          << "  theta_inf = " << std::setprecision(12) << traj.theta_inf
          << ", max |E(t) - E(0)| / |E(0)| = "
          << drift / std::max(std::abs(traj.energy0), std::numeric_limits<double>::min())
          << '\n';
  return kExitOk;
}

int cmd_eigen_report(Context& ctx) {
  const ModelParams params = setup([&] { return params_from_config(ctx.cfg); });
  const int n_min = ctx.cfg.get_int("eigen", "n_min", 1);
  const int n_max = ctx.cfg.get_int("eigen", "n_max", params.n_modes);
  if (n_min < 1 || n_max < n_min) throw SetupError("eigen: need 1 <= n_min <= n_max");

  std::vector<EigenReportRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  double worst_re = -std::numeric_limits<double>::infinity();
  for (int n = n_min; n <= n_max; ++n) {
    rows.push_back(eigen_report_row(n, params));
    for (const cplx& l : rows.back().lambda) worst_re = std::max(worst_re, l.real());
  }
  auto os = open_csv(ctx.out_dir / "eigen_report.csv");
  write_eigen_report_csv(os, rows);
  ctx.out << "eigen-report: n = " << n_min << ".." << n_max << ", max Re(lambda) = "
          << std::setprecision(6) << worst_re << ", first separated n = "
          << separation_threshold(params) << '\n';
  return kExitOk;
}

int cmd_asymptotics(Context& ctx) {
  const ModelParams params = setup([&] { return params_from_config(ctx.cfg); });
  const int n_min = ctx.cfg.get_int("asymptotics", "n_min", 16);
  const int n_max = ctx.cfg.get_int("asymptotics", "n_max", 1024);
  const double tol = ctx.cfg.get_double("asymptotics", "tolerance", 0.3);
  if (n_min < 1 || n_max < 2 * n_min) {
    throw SetupError("asymptotics: need 1 <= n_min and 2 n_min <= n_max");
  }

  const AsymptoticSlopes sl = asymptotic_slopes(params, n_min, n_max);
  const std::array<std::tuple<const char*, double, double>, 7> checks = {{
      {"lambda1", sl.lambda1, -2.0},
      {"lambda2", sl.lambda2, -1.0},
      {"lambda3", sl.lambda3, -1.0},
      {"residual_V1", sl.residual_V1, -1.0},
      {"residual_V2", sl.residual_V2, -1.0},
      {"residual_V3", sl.residual_V3, -1.0},
      {"similarity", sl.similarity, -1.0},
  }};
  ordered_json j;
  j["params"] = params_json(params);
  j["n"] = sl.ns;
  j["tolerance"] = tol;
  bool all = true;
  ordered_json arr = ordered_json::array();
  for (const auto& [name, slope, expected] : checks) {
    const bool ok = std::abs(slope - expected) <= tol;
    all = all && ok;
    arr.push_back({{"quantity", name}, {"slope", num(slope)}, {"expected", expected},
                   {"pass", ok}});
    ctx.out << "  " << std::left << std::setw(12) << name << " slope " << std::right
            << std::fixed << std::setprecision(4) << std::setw(8) << slope << "  expected "
            << std::setw(5) << std::setprecision(1) << expected << "  "
            << (ok ? "pass" : "FAIL") << '\n';
    ctx.out.unsetf(std::ios::floatfield);
  }
  j["slopes"] = arr;
  j["pass"] = all;
  write_json(ctx.out_dir / "asymptotics.json", j);
  ctx.out << "asymptotics-verify: " << (all ? "pass" : "FAIL") << '\n';
  return all ? kExitOk : kExitFailed;
}

double max_finite(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) {
    if (std::isfinite(x)) m = std::max(m, x);
  }
  return m;
}

int cmd_duhamel(Context& ctx) {
  const ModelParams params = setup([&] { return params_from_config(ctx.cfg); });
  const SpectralState init = setup([&] { return initial_state(ctx, params); });
  const double t_end = ctx.cfg.get_double("duhamel", "t_end", 5.0);
  const double h = ctx.cfg.get_double("duhamel", "h", 0.01);
  const double dt_ref = ctx.cfg.get_double("duhamel", "dt_reference", 1e-3);
  const int n_split = ctx.cfg.get_int("duhamel", "n_split", 0);
  const double max_ratio = ctx.cfg.get_double("duhamel", "max_ratio", 0.9);
  const double max_distance = ctx.cfg.get_double("duhamel", "max_distance", 1e-4);
  FixedPointOptions fo;
  fo.tol = ctx.cfg.get_double("duhamel", "tol", 1e-13);
  fo.max_iterations = ctx.cfg.get_int("duhamel", "max_iterations", 200);
  if (!(t_end > 0.0) || !(h > 0.0) || !(dt_ref > 0.0)) {
    throw SetupError("duhamel: t_end, h and dt_reference must be positive");
  }
  const long ratio_steps = std::lround(h / dt_ref);
  if (ratio_steps < 1 || std::abs(static_cast<double>(ratio_steps) * dt_ref - h) > 1e-9 * h) {
    throw SetupError("duhamel: h must be an integer multiple of dt_reference");
  }

  const double theta_inf = theta_infinity(init, params);
  const ModelParams q = at_theta_inf(params, theta_inf);
  const ProjectionBasis basis = make_basis(q, n_split);
  const Thresholds th = thresholds(q, theta_inf);
  fo.alpha = th.alpha;

  const ProjectionState p0 = to_projection(init, q, basis);
  FixedPointResult fp;
  bool diverged = false;
  std::string divergence;
  try {
    fp = fixed_point_solve(p0, q, basis, theta_inf, t_end, h, fo);
  } catch (const DivergenceError& e) {
    diverged = true;
    divergence = e.what();
  }
  if (!diverged) {
    auto os = open_csv(ctx.out_dir / "iteration_log.csv");
    write_iteration_log_csv(os, fp);
  }

  // Direct integration sampled on the same grid.
  double distance = std::numeric_limits<double>::infinity();
  if (!diverged) {
    IntegratorConfig ic;
    ic.t_end = t_end;
    ic.dt = dt_ref;
    ic.record_every = static_cast<int>(ratio_steps);
    ic.state_every = 1;
    ic.with_min_theta = false;
    ic.validate(params);
    const TrajectoryRecord ref = run(init, params, ic);
    ProjectionTrajectory rp;
    rp.times = ref.state_times;
    for (const SpectralState& st : ref.states) rp.states.push_back(to_projection(st, q, basis));
    if (rp.times.size() != fp.trajectory.times.size()) {
      throw DimensionError("reference and fixed-point grids differ in length");
    }
    distance = x_distance(fp.trajectory, rp, q.s, th.alpha);
  }

  const double worst_ratio = diverged ? std::numeric_limits<double>::infinity()
                                      : max_finite(fp.ratios);
  const bool pass = !diverged && fp.converged && worst_ratio <= max_ratio &&
                    distance <= max_distance;

  ordered_json j;
  j["params"] = params_json(q);
  j["initial"] = preset_json(ctx.cfg, ctx.opts);
  j["theta_inf"] = theta_inf;
  j["alpha"] = th.alpha;
  j["n_split"] = basis.n_split;
  j["t_end"] = t_end;
  j["h"] = h;
  j["initial_x_norm"] = num(diverged ? initial_x_norm(init, params) : fp.initial_x_norm);
  j["iterations"] = diverged ? 0 : fp.iterations;
  j["converged"] = !diverged && fp.converged;
  if (diverged) j["divergence"] = divergence;
  j["max_contraction_ratio"] = num(worst_ratio);
  j["max_ratio_allowed"] = max_ratio;
  j["x_distance_to_reference"] = num(distance);
  j["max_distance_allowed"] = max_distance;
  j["dt_reference"] = dt_ref;
  j["pass"] = pass;
  write_json(ctx.out_dir / "duhamel.json", j);

  ctx.out << "duhamel: ";
  if (diverged) {
    ctx.out << "Picard iteration diverged (" << divergence << ")\n";
  } else {
    ctx.out << fp.iterations << " iterations, converged = " << (fp.converged ? "yes" : "no")
            << ", max ratio = " << std::setprecision(4) << worst_ratio
            << ", X-distance to etd_rk2 = " << std::setprecision(3) << distance << '\n';
  }
  ctx.out << "duhamel: " << (pass ? "pass" : "FAIL") << '\n';
  return pass ? kExitOk : kExitFailed;
}

int cmd_decay_fit(Context& ctx) {
  const ModelParams params = setup([&] { return params_from_config(ctx.cfg); });
  const SpectralState init = setup([&] { return initial_state(ctx, params); });
  const double theta_inf = theta_infinity(init, params);
  const ModelParams q = at_theta_inf(params, theta_inf);
  const Thresholds th = thresholds(q, theta_inf);
  if (!(th.alpha > 0.0)) throw DomainError("thresholds returned a non-positive alpha");

  const IntegratorConfig ic = setup([&] {
    IntegratorConfig c = integrator_from_config(ctx.cfg, std::ceil(20.0 / th.alpha), 0.01);
    c.validate(params);
    return c;
  });
  const TrajectoryRecord traj = run(init, params, ic);
  {
    auto os = open_csv(ctx.out_dir / "trajectory.csv");
    write_trajectory_csv(os, traj);
  }

  const bool custom_window = ctx.cfg.has("fit", "t_lo") || ctx.cfg.has("fit", "t_hi");
  const auto t = norm_column(traj, "t");
  const SlowestMode slow = slowest_mode(q);

  struct Target {
    const char* column;
    double factor;
  };
  const std::array<Target, 4> targets = {
      {{"hs_u_x", 0.9}, {"hs_u_t", 0.9}, {"hs_theta_dev", 0.9}, {"theta0_dev", 1.8}}};

  ordered_json j;
  j["params"] = params_json(params);
  j["initial"] = preset_json(ctx.cfg, ctx.opts);
  j["theta_inf"] = theta_inf;
  j["thresholds"] = {{"N0", th.N0}, {"alpha1", th.alpha1}, {"alpha2", th.alpha2},
                     {"alpha", th.alpha}};
  j["t_end"] = ic.t_end;
  j["noise_floor"] = noise_floor(traj);
  // Leading-order decay of the wave projections, reported for comparison only.
  j["wave_rate_reference"] = params.mu * params.mu * theta_inf / 2.0;
  bool all = true;
  ordered_json fits = ordered_json::array();
  for (const Target& tg : targets) {
    DecayFit fit;
    std::string error;
    try {
      if (custom_window) {
        const auto [lo, hi] = default_window(t.back());
        fit = fit_decay(t, norm_column(traj, tg.column), ctx.cfg.get_double("fit", "t_lo", lo),
                        ctx.cfg.get_double("fit", "t_hi", hi));
      } else {
        fit = fit_column(traj, tg.column);
      }
    } catch (const DomainError& e) {
      error = e.what();
    }
    fit.predicted_alpha = th.alpha;
    fit.slowest_mode_rate = slow.rate;
    const double required = tg.factor * th.alpha;
    const bool ok = error.empty() && fit.fitted_rate >= required;
    all = all && ok;
    ordered_json f = {{"column", tg.column},
                      {"window", {fit.t_lo, fit.t_hi}},
                      {"points", fit.points},
                      {"fitted_rate", num(fit.fitted_rate)},
                      {"r_squared", num(fit.r_squared)},
                      {"predicted_alpha", fit.predicted_alpha},
                      {"slowest_mode_rate", fit.slowest_mode_rate},
                      {"required_rate", required},
                      {"pass", ok}};
    if (!error.empty()) f["error"] = error;
    fits.push_back(f);
    ctx.out << "  " << std::left << std::setw(13) << tg.column << std::right;
    if (error.empty()) {
      ctx.out << " rate " << std::setprecision(5) << fit.fitted_rate << " on [" << fit.t_lo
              << ", " << fit.t_hi << "], r^2 " << fit.r_squared;
    } else {
      ctx.out << " " << error;
    }
    ctx.out << "  (need >= " << required << ") " << (ok ? "pass" : "FAIL") << '\n';
  }
  j["slowest_mode"] = {{"n", slow.n}, {"branch", branch_name(slow.branch)}, {"rate", slow.rate}};
  j["fits"] = fits;
  j["pass"] = all;
  write_json(ctx.out_dir / "decay_fit.json", j);
  ctx.out << "decay-fit: alpha = " << th.alpha << ", " << (all ? "pass" : "FAIL") << '\n';
  return all ? kExitOk : kExitFailed;
}

int cmd_thresholds(Context& ctx) {
  const ModelParams params = setup([&] { return params_from_config(ctx.cfg); });
  double theta_inf = 0.0;
  if (ctx.cfg.has("thresholds", "theta_inf")) {
    theta_inf = ctx.cfg.get_double("thresholds", "theta_inf", 1.0);
  } else {
    theta_inf = theta_infinity(initial_state(ctx, params), params);
  }
  if (!(theta_inf > 0.0)) throw SetupError("thresholds: theta_inf must be positive");
  const ModelParams q = at_theta_inf(params, theta_inf);
  const Thresholds th = thresholds(q, theta_inf);

  ordered_json j;
  j["mu"] = q.mu;
  j["theta_inf"] = theta_inf;
  j["n0_estimate"] = th.n0_estimate;
  j["N0_floor"] = th.N0_floor;
  j["N0"] = th.N0;
  j["alpha1"] = th.alpha1;
  j["alpha1_mode"] = th.alpha1_mode;
  j["alpha2"] = th.alpha2;
  j["alpha"] = th.alpha;
  write_json(ctx.out_dir / "thresholds.json", j);
  ctx.out << std::setprecision(10) << "thresholds: theta_inf = " << theta_inf
          << ", mu = " << q.mu << '\n'
          << "  n0 (first separated) = " << th.n0_estimate << '\n'
          << "  N0 = " << th.N0 << " (arithmetic floor " << th.N0_floor << ")\n"
          << "  alpha1 = " << th.alpha1 << " (n = " << th.alpha1_mode << ")\n"
          << "  alpha2 = " << th.alpha2 << '\n'
          << "  alpha  = " << th.alpha << '\n';
  return kExitOk;
}

const std::map<std::string, std::function<int(Context&)>>& commands() {
  static const std::map<std::string, std::function<int(Context&)>> table = {
      {"simulate", cmd_simulate},       {"eigen-report", cmd_eigen_report},
      {"asymptotics-verify", cmd_asymptotics}, {"duhamel", cmd_duhamel},
      {"decay-fit", cmd_decay_fit},     {"thresholds", cmd_thresholds},
  };
  return table;
}

}  // namespace

bool is_known_command(const std::string& name) { return commands().count(name) != 0; }

int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const auto it = commands().find(opts.command);
  if (it == commands().end()) {
    err << "error: unknown command '" << opts.command << "'\n";
    return kExitUsage;
  }
  Config cfg;
  try {
    cfg = Config::load(opts.config_path);
  } catch (const Error& e) {
    err << opts.config_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  fs::path out_dir = opts.out_dir ? fs::path(*opts.out_dir)
                                  : fs::path(cfg.get_string("output", "dir", "."));
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << out_dir.string() << ": " << ec.message()
        << '\n';
    return kExitUsage;
  }

  Context ctx{opts, cfg, out, err, out_dir};
  int status = kExitFailed;
  try {
    status = it->second(ctx);
  } catch (const ParseError& e) {
    err << opts.config_path << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const SetupError& e) {
    err << opts.config_path << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  for (const std::string& key : cfg.unused_keys()) {
    err << "warning: unused config key " << key << '\n';
  }
  return status;
}

}  // namespace heatstring::cli

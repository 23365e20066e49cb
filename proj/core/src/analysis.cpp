#include "heatstring/analysis.hpp"

#include <algorithm>
#include <tuple>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatstring/errors.hpp"

namespace heatstring {

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("x and y differ in length");
  if (x.size() < 2) throw DomainError("a line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("a line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DomainError("log-log fit needs positive x");
    lx[i] = std::log(x[i]);
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw DomainError("log-log fit needs positive y");
    ly[i] = std::log(y[i]);
  }
  return least_squares_line(lx, ly).slope;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, double t_lo,
                   double t_hi) {
  if (t.size() != value.size()) throw DimensionError("times and values differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(value[i] > 0.0)) {
      throw DomainError("non-positive value " + std::to_string(value[i]) + " at t = " +
                        std::to_string(t[i]) + " inside the fit window");
    }
    xs.push_back(t[i]);
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 2) throw DomainError("fit window holds fewer than two samples");
  const LineFit line = least_squares_line(xs, ys);
  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.fitted_rate = -line.slope;
  fit.r_squared = line.r_squared;
  fit.points = xs.size();
  return fit;
}

std::pair<double, double> default_window(double t_end) { return {0.5 * t_end, 0.95 * t_end}; }

double truncate_at_floor(const std::vector<double>& t, const std::vector<double>& value,
                         double t_lo, double t_hi, double floor) {
  double last_good = t_lo;
  for (std::size_t i = 0; i < t.size() && t[i] <= t_hi; ++i) {
    if (t[i] < t_lo) continue;
    if (!(value[i] > floor)) return last_good;
    last_good = t[i];
  }
  return t_hi;
}

std::pair<std::vector<double>, std::vector<double>> peak_envelope(const std::vector<double>& t,
                                                                  const std::vector<double>& value,
                                                                  double block) {
  if (t.size() != value.size()) throw DimensionError("times and values differ in length");
  if (!(block > 0.0)) throw DomainError("block width must be positive");
  std::vector<double> pt, pv;
  if (t.empty()) return {pt, pv};
  const double t0 = t.front();
  long current = 0;
  double best_t = t0, best_v = -1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const long b = static_cast<long>(std::floor((t[i] - t0) / block));
    if (b != current) {
      if (best_v >= 0.0) {
        pt.push_back(best_t);
        pv.push_back(best_v);
      }
      current = b;
      best_v = -1.0;
    }
    if (value[i] > best_v) {
      best_v = value[i];
      best_t = t[i];
    }
  }
  // The final block is kept only if it spans a full width.
  if (best_v >= 0.0 && t.back() - t0 >= static_cast<double>(current + 1) * block) {
    pt.push_back(best_t);
    pv.push_back(best_v);
  }
  return {pt, pv};
}

std::vector<double> norm_column(const TrajectoryRecord& traj, const std::string& name) {
  std::vector<double> out;
  out.reserve(traj.norms.size());
  for (const NormRecord& r : traj.norms) {
    if (name == "t") {
      out.push_back(r.t);
    } else if (name == "energy") {
      out.push_back(r.energy);
    } else if (name == "hs_u_x") {
      out.push_back(r.hs_u_x);
    } else if (name == "hs_u_t") {
      out.push_back(r.hs_u_t);
    } else if (name == "hs_theta_dev") {
      out.push_back(r.hs_theta_dev);
    } else if (name == "theta0_dev") {
      out.push_back(r.theta0_dev);
    } else if (name == "min_theta") {
      out.push_back(r.min_theta);
    } else {
      throw DomainError("unknown norm column '" + name + "'");
    }
  }
  return out;
}

double noise_floor(const TrajectoryRecord& traj) {
  const double roundoff =
      1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(traj.theta_inf));
  if (traj.linearized) return roundoff;
  double drift = 0.0;
  for (const NormRecord& r : traj.norms) drift = std::max(drift, std::abs(r.energy - traj.energy0));
  return std::max(roundoff, 10.0 * drift / std::numbers::pi);
}

DecayFit fit_column(const TrajectoryRecord& traj, const std::string& column,
                    double envelope_block) {
  std::vector<double> t = norm_column(traj, "t");
  std::vector<double> v = norm_column(traj, column);
  if (t.empty()) throw DomainError("empty trajectory");
  const double t_end = t.back();
  const double t_eff = truncate_at_floor(t, v, t.front(), t_end, noise_floor(traj));
  const auto [lo, hi] = default_window(t_eff);
  if (envelope_block > 0.0) {
    std::tie(t, v) = peak_envelope(t, v, envelope_block);
  }
  return fit_decay(t, v, lo, hi);
}

SlowestMode slowest_mode(const ModelParams& params) {
  SlowestMode best;
  best.rate = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= params.n_modes; ++n) {
    const EigenSystem es = eigen_exact(n, params);
    for (int j = 0; j < 3; ++j) {
      if (-es.lambda[j].real() < best.rate) {
        best = {n, es.labels[j], -es.lambda[j].real()};
      }
    }
  }
  return best;
}

AsymptoticSlopes asymptotic_slopes(const ModelParams& params, int n_min, int n_max) {
  if (n_min < 1 || n_max < 2 * n_min) throw DomainError("need 1 <= n_min and 2 n_min <= n_max");
  AsymptoticSlopes out;
  std::vector<double> x, e1, e2, e3, r1, r2, r3, sim;
  for (int n = n_min; n <= n_max; n *= 2) {
    const EigenReportRow row = eigen_report_row(n, params);
    if (row.degenerate || !std::isfinite(row.similarity_residual)) continue;
    out.ns.push_back(n);
    x.push_back(n);
    e1.push_back(row.err_lambda1);
    e2.push_back(row.err_lambda2);
    e3.push_back(row.err_lambda3);
    r1.push_back(row.residual_V1);
    r2.push_back(row.residual_V2);
    r3.push_back(row.residual_V3);
    sim.push_back(row.similarity_residual);
  }
  if (x.size() < 2) throw DomainError("fewer than two usable n for the regression");
  out.lambda1 = loglog_slope(x, e1);
  out.lambda2 = loglog_slope(x, e2);
  out.lambda3 = loglog_slope(x, e3);
  out.residual_V1 = loglog_slope(x, r1);
  out.residual_V2 = loglog_slope(x, r2);
  out.residual_V3 = loglog_slope(x, r3);
  out.similarity = loglog_slope(x, sim);
  return out;
}

}  // namespace heatstring

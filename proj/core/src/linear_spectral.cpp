#include "heatstring/linear_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "heatstring/errors.hpp"

namespace heatstring {

namespace {

void require_mode(int n) {
  if (n < 1) throw DomainError("mode index n must be >= 1, got " + std::to_string(n));
}

double inf_norm(const Eigen::Matrix3cd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

double vec_inf_norm(const Eigen::Vector3cd& v) { return v.cwiseAbs().maxCoeff(); }

// Roots of lambda^3 + c2 lambda^2 + c1 lambda + c0 through the depressed cubic
// t^3 + p t + q = 0, lambda = t - c2/3. Only starting values: polished later.
std::array<cplx, 3> cardano(const CharPoly& cp) {
  const double c2 = cp.c2, c1 = cp.c1, c0 = cp.c0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const cplx disc = std::sqrt(cplx(q * q / 4.0 + p * p * p / 27.0));
  cplx big = -0.5 * q + disc;
  const cplx other = -0.5 * q - disc;
  if (std::abs(other) > std::abs(big)) big = other;
  std::array<cplx, 3> roots;
  if (std::abs(big) == 0.0) {
    roots.fill(cplx(-c2 / 3.0, 0.0));
    return roots;
  }
  const cplx cbrt = std::pow(big, 1.0 / 3.0);
  const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
  cplx w(1.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    const cplx ck = w * cbrt;
    roots[k] = ck - p / (3.0 * ck) - c2 / 3.0;
    w *= omega;
  }
  return roots;
}

// p(-n^2 + d) written in the shift d so that the real branch keeps full
// relative precision for large n.
double shifted_poly(double d, double nn, double am2) {
  const double r = d - nn;
  return r * r * d + nn * (am2 + 1.0) * d - am2 * nn * nn;
}

double shifted_poly_deriv(double d, double nn, double am2) {
  const double r = d - nn;
  return 2.0 * r * d + r * r + nn * (am2 + 1.0);
}

double polish_shift(double d, double nn, double am2) {
  for (int it = 0; it < 100; ++it) {
    const double f = shifted_poly(d, nn, am2);
    const double df = shifted_poly_deriv(d, nn, am2);
    if (f == 0.0 || df == 0.0) break;
    const double step = f / df;
    const double next = d - step;
    if (std::abs(shifted_poly(next, nn, am2)) > std::abs(f) && it > 3) break;
    d = next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(d))) {
      break;
    }
  }
  return d;
}

cplx char_poly_deriv(const CharPoly& cp, cplx z) { return (3.0 * z + 2.0 * cp.c2) * z + cp.c1; }

// Newton on the full cubic, keeping the best iterate seen.
cplx polish_root(const CharPoly& cp, cplx z) {
  cplx best = z;
  double best_res = std::abs(char_poly_eval(cp, z));
  for (int it = 0; it < 50 && best_res > 0.0; ++it) {
    const cplx d = char_poly_deriv(cp, z);
    if (std::abs(d) == 0.0) break;
    z -= char_poly_eval(cp, z) / d;
    const double res = std::abs(char_poly_eval(cp, z));
    if (res < best_res) {
      best_res = res;
      best = z;
    } else if (it > 5) {
      break;
    }
  }
  return best;
}

// Null vector of (M - lambda I) from the cross product of the two most
// independent rows.
Eigen::Vector3cd null_vector(const Eigen::Matrix3cd& m) {
  const Eigen::Vector3cd r0 = m.row(0).transpose();
  const Eigen::Vector3cd r1 = m.row(1).transpose();
  const Eigen::Vector3cd r2 = m.row(2).transpose();
  auto cross = [](const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return Eigen::Vector3cd(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                            a(0) * b(1) - a(1) * b(0));
  };
  std::array<Eigen::Vector3cd, 3> c = {cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].norm() > c[best].norm()) best = i;
  }
  return c[best];
}

Eigen::Vector3cd normalize_by(const Eigen::Vector3cd& v, int preferred) {
  Eigen::Index pivot = preferred;
  if (std::abs(v(preferred)) < 1e-14 * v.cwiseAbs().maxCoeff()) v.cwiseAbs().maxCoeff(&pivot);
  if (std::abs(v(pivot)) == 0.0) return v;
  return v / v(pivot);
}

double condition_number(const std::array<Eigen::Vector3cd, 3>& vs) {
  Eigen::Matrix3cd m;
  for (int j = 0; j < 3; ++j) m.col(j) = vs[j];
  Eigen::FullPivLU<Eigen::Matrix3cd> lu(m);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  return inf_norm(m) * inf_norm(lu.inverse());
}

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Real:
      return "real-branch";
    case Branch::Minus:
      return "minus-branch";
    case Branch::Plus:
      return "plus-branch";
  }
  return "unknown";
}

Eigen::Matrix3d build_A(int n, const ModelParams& params) {
  require_mode(n);
  const double dn = n, mu = params.mu, a = params.a;
  Eigen::Matrix3d m;
  m << 0.0, dn, 0.0,
      -dn, 0.0, -mu * dn,
      0.0, a * mu * dn, -dn * dn;
  return m;
}

Eigen::Matrix3d build_Astar(int n, const ModelParams& params) {
  return build_A(n, params).transpose();
}

CharPoly char_poly_coeffs(int n, const ModelParams& params) {
  require_mode(n);
  const double nn = static_cast<double>(n) * n;
  CharPoly cp;
  cp.c3 = 1.0;
  cp.c2 = nn;
  cp.c1 = nn * (params.a * params.mu * params.mu + 1.0);
  cp.c0 = nn * nn;
  return cp;
}

cplx char_poly_eval(const CharPoly& p, cplx lambda) {
  return ((p.c3 * lambda + p.c2) * lambda + p.c1) * lambda + p.c0;
}

EigenSystem eigen_exact(int n, const ModelParams& params) {
  require_mode(n);
  const CharPoly cp = char_poly_coeffs(n, params);
  const double nn = cp.c2;
  const double am2 = params.a * params.mu * params.mu;
  const double tol = 1e-9 * std::max(1.0, nn * nn);

  // A real root exists; the candidate closest to the real axis seeds it.
  const std::array<cplx, 3> seeds = cardano(cp);
  const auto real_seed = *std::min_element(seeds.begin(), seeds.end(), [](cplx x, cplx y) {
    return std::abs(x.imag()) < std::abs(y.imag());
  });
  const double shift = polish_shift(real_seed.real() + nn, nn, am2);
  const double r = shift - nn;
  double residual = std::abs(shifted_poly(shift, nn, am2));

  // Deflate: lambda^2 + b lambda + c with b = c2 + r = shift, c = -c0 / r.
  const double b = shift;
  const double c = -cp.c0 / r;
  const double disc = b * b - 4.0 * c;

  EigenSystem es;
  std::array<cplx, 3> roots;
  std::array<double, 3> shifts{};
  if (disc < 0.0) {
    const cplx lam2 = polish_root(cp, cplx(-0.5 * b, -0.5 * std::sqrt(-disc)));
    const cplx minus(lam2.real(), -std::abs(lam2.imag()));
    roots = {cplx(r, 0.0), minus, std::conj(minus)};
    residual = std::max(residual, std::abs(char_poly_eval(cp, minus)));
    es.real_shift = shift;
  } else {
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (b + std::copysign(sq, b));
    double x1 = qq;
    double x2 = (qq != 0.0) ? c / qq : -0.5 * b;
    x1 = polish_root(cp, cplx(x1, 0.0)).real();
    x2 = polish_root(cp, cplx(x2, 0.0)).real();
    residual = std::max({residual, std::abs(char_poly_eval(cp, x1)),
                         std::abs(char_poly_eval(cp, x2))});
    std::array<double, 3> all = {r, x1, x2};
    shifts = {shift, x1 + nn, x2 + nn};
    // Real branch: nearest -n^2. The other two ordered by real part.
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (std::abs(shifts[i]) < std::abs(shifts[k])) k = i;
    }
    es.real_shift = shifts[k];
    std::array<double, 2> rest{};
    std::size_t m = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != k) rest[m++] = all[i];
    }
    std::sort(rest.begin(), rest.end());
    roots = {cplx(all[k], 0.0), cplx(rest[0], 0.0), cplx(rest[1], 0.0)};
    es.degenerate = true;
  }

  if (!(residual <= tol)) {
    throw ConditioningError("eigen_exact(n=" + std::to_string(n) + "): residual " +
                            std::to_string(residual) + " above target " + std::to_string(tol));
  }
  es.lambda = roots;
  es.residual = residual;

  const Eigen::Matrix3cd astar = build_Astar(n, params).cast<cplx>();
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix3cd m = astar - roots[j] * Eigen::Matrix3cd::Identity();
    es.vectors[j] = normalize_by(null_vector(m), j == 0 ? 2 : 0);
  }
  if (!es.degenerate) es.vectors[2] = es.vectors[1].conjugate();
  es.condition = condition_number(es.vectors);
  return es;
}

GershgorinDisks gershgorin(int n, const ModelParams& params) {
  require_mode(n);
  const double dn = n;
  GershgorinDisks g;
  g.centers = {cplx(0.0), cplx(0.0), cplx(-dn * dn)};
  g.radii = {dn, dn * (1.0 + params.a * params.mu), params.mu * dn};
  return g;
}

bool gershgorin_separated(int n, const ModelParams& params) {
  require_mode(n);
  const double dn = n;
  return dn * dn - params.mu * dn > dn * (1.0 + params.a * params.mu);
}

int first_separated_n(const ModelParams& params, int n_max) {
  for (int n = 1; n <= n_max; ++n) {
    if (gershgorin_separated(n, params)) return n;
  }
  return -1;
}

int separation_threshold(const ModelParams& params) {
  return static_cast<int>(std::floor(1.0 + params.a * params.mu + params.mu)) + 1;
}

EigenSystem eigen_asymptotic(int n, const ModelParams& params) {
  require_mode(n);
  const double dn = n, nn = dn * dn;
  const double a = params.a, mu = params.mu;
  const double am2 = a * mu * mu;
  const cplx i(0.0, 1.0);

  EigenSystem es;
  es.lambda = {cplx(-nn + am2, 0.0), -dn * i - am2 / 2.0, dn * i - am2 / 2.0};
  es.real_shift = am2;
  es.vectors[0] = Eigen::Vector3cd(-a * mu / nn, -a * mu / dn, 1.0 - am2 / nn);
  es.vectors[1] = Eigen::Vector3cd(1.0, i + am2 / (2.0 * dn),
                                   -mu * i / dn + mu / nn - a * mu * mu * mu / (2.0 * nn));
  es.vectors[2] = es.vectors[1].conjugate();
  es.condition = condition_number(es.vectors);
  return es;
}

SimilarityTriple similarity(int n, const ModelParams& params) {
  const EigenSystem es = eigen_asymptotic(n, params);
  SimilarityTriple st;
  for (int j = 0; j < 3; ++j) {
    st.C.col(j) = es.vectors[j];
    st.D(j) = es.lambda[j];
  }
  Eigen::FullPivLU<Eigen::Matrix3cd> lu(st.C);
  if (!lu.isInvertible() || !(es.condition < 1e12)) {
    throw SingularityError("C_n is numerically singular at n = " + std::to_string(n));
  }
  st.C_inv = lu.inverse();
  return st;
}

double similarity_residual(int n, const ModelParams& params) {
  const SimilarityTriple st = similarity(n, params);
  const Eigen::Matrix3cd astar = build_Astar(n, params).cast<cplx>();
  return inf_norm(astar - st.C * st.D.asDiagonal() * st.C_inv);
}

LyapunovCheck lyapunov_rate_check(int n, const ModelParams& params, const Eigen::Vector3d& y) {
  const Eigen::Vector3d dy = build_A(n, params) * y;
  const double a = params.a;
  LyapunovCheck out;
  out.energy = y(0) * y(0) + y(1) * y(1) + y(2) * y(2) / a;
  out.derivative = 2.0 * y(0) * dy(0) + 2.0 * y(1) * dy(1) + 2.0 * y(2) * dy(2) / a;
  out.predicted = -(2.0 * n * n / a) * y(2) * y(2);
  return out;
}

std::array<double, 3> eigen_residuals(int n, const ModelParams& params, const EigenSystem& es) {
  const Eigen::Matrix3cd astar = build_Astar(n, params).cast<cplx>();
  std::array<double, 3> out{};
  for (int j = 0; j < 3; ++j) {
    out[j] = vec_inf_norm(astar * es.vectors[j] - es.lambda[j] * es.vectors[j]);
  }
  return out;
}

Thresholds thresholds(const ModelParams& params, double theta_inf) {
  if (!(theta_inf > 0.0) || !std::isfinite(theta_inf)) {
    throw DomainError("thresholds need theta_inf > 0");
  }
  ModelParams q = params;
  q.a = theta_inf;
  const double mu = q.mu, th = theta_inf;

  Thresholds t;
  t.n0_estimate = first_separated_n(q);
  const double k = (1.0 + th * th) * (1.0 + mu * mu * mu * mu);
  const double floor_value = std::max({static_cast<double>(t.n0_estimate),
                                       std::sqrt(2.0 * mu * mu * th), 72.0 * k,
                                       576.0 * k / (th * mu)});
  t.N0_floor = static_cast<int>(std::ceil(floor_value * (1.0 - 1e-14)));

  const double target = -mu * mu * th / 4.0;
  auto clauses_hold = [&](int n) {
    const EigenSystem es = eigen_exact(n, q);
    for (const cplx& l : es.lambda) {
      if (l.real() > target) return false;
    }
    try {
      const SimilarityTriple st = similarity(n, q);
      return st.C.cwiseAbs().maxCoeff() <= 2.0 && st.C_inv.cwiseAbs().maxCoeff() <= 2.0;
    } catch (const SingularityError&) {
      return false;
    }
  };
  t.N0 = t.N0_floor;
  for (int n = t.N0_floor; n <= 2 * t.N0_floor; ++n) {
    if (!clauses_hold(n)) t.N0 = n + 1;
  }

  t.alpha1 = std::numeric_limits<double>::infinity();
  for (int n = 1; n < t.N0; ++n) {
    const EigenSystem es = eigen_exact(n, q);
    for (const cplx& l : es.lambda) {
      const double rate = -l.real() / 3.0;
      if (rate < t.alpha1) {
        t.alpha1 = rate;
        t.alpha1_mode = n;
      }
    }
  }
  t.alpha2 = mu * mu * th / 4.0;
  t.alpha = std::min(t.alpha1, t.alpha2);
  return t;
}

EigenReportRow eigen_report_row(int n, const ModelParams& params) {
  const EigenSystem ex = eigen_exact(n, params);
  const EigenSystem as = eigen_asymptotic(n, params);
  EigenReportRow row;
  row.n = n;
  row.lambda = ex.lambda;
  row.err_lambda1 = std::hypot(ex.real_shift - as.real_shift, ex.lambda[0].imag());
  row.err_lambda2 = std::abs(ex.lambda[1] - as.lambda[1]);
  row.err_lambda3 = std::abs(ex.lambda[2] - as.lambda[2]);
  const auto res = eigen_residuals(n, params, as);
  row.residual_V1 = res[0];
  row.residual_V2 = res[1];
  row.residual_V3 = res[2];
  try {
    row.similarity_residual = similarity_residual(n, params);
  } catch (const SingularityError&) {
    row.similarity_residual = std::numeric_limits<double>::quiet_NaN();
  }
  row.condition = ex.condition;
  row.separated = gershgorin_separated(n, params);
  row.degenerate = ex.degenerate;
  return row;
}

void write_eigen_report_csv(std::ostream& os, const std::vector<EigenReportRow>& rows) {
  os << "n,re_lambda1,im_lambda1,re_lambda2,im_lambda2,re_lambda3,im_lambda3,"
        "err_lambda1,err_lambda2,err_lambda3,residual_V1,residual_V2,residual_V3,"
        "similarity_residual,condition,separated,degenerate\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.n;
    for (const cplx& l : r.lambda) os << ',' << l.real() << ',' << l.imag();
    os << ',' << r.err_lambda1 << ',' << r.err_lambda2 << ',' << r.err_lambda3 << ','
       << r.residual_V1 << ',' << r.residual_V2 << ',' << r.residual_V3 << ','
       << r.similarity_residual << ',' << r.condition << ',' << (r.separated ? 1 : 0) << ','
       << (r.degenerate ? 1 : 0) << '\n';
  }
}

}  // namespace heatstring

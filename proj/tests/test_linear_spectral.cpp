#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "heatstring/analysis.hpp"
#include "heatstring/errors.hpp"
#include "heatstring/linear_spectral.hpp"

namespace hs = heatstring;
using cplx = std::complex<double>;

namespace {

hs::ModelParams params(double mu, double a) { return hs::ModelParams::make(mu, a, 8); }

// det(lambda I - M) by cofactor expansion along the first row.
double det_shifted(const Eigen::Matrix3d& m, double lambda) {
  const Eigen::Matrix3d b = lambda * Eigen::Matrix3d::Identity() - m;
  return b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
         b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
         b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
}

// Coefficients (c3, c2, c1, c0) from four samples of the determinant.
std::array<double, 4> det_coefficients(const Eigen::Matrix3d& m) {
  Eigen::Matrix4d v;
  Eigen::Vector4d y;
  for (int i = 0; i < 4; ++i) {
    const double l = static_cast<double>(i) - 1.5;
    v(i, 0) = l * l * l;
    v(i, 1) = l * l;
    v(i, 2) = l;
    v(i, 3) = 1.0;
    y(i) = det_shifted(m, l);
  }
  const Eigen::Vector4d c = v.fullPivLu().solve(y);
  return {c(0), c(1), c(2), c(3)};
}

// Real root of a monic cubic by bisection, then the quadratic factor.
std::array<cplx, 3> bisection_roots(double c2, double c1, double c0) {
  auto p = [&](double x) { return ((x + c2) * x + c1) * x + c0; };
  double lo = -1.0, hi = 1.0;
  while (p(lo) > 0) lo *= 2;
  while (p(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p(mid) < 0 ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  // x^3 + c2 x^2 + c1 x + c0 = (x - r)(x^2 + b x + c)
  const double b = c2 + r;
  const double c = c1 + r * b;
  const cplx disc = std::sqrt(cplx(b * b - 4 * c, 0.0));
  return {cplx(r, 0.0), (-b - disc) / 2.0, (-b + disc) / 2.0};
}

double max_abs_diff(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(BuildA, KnownEntries) {
  const Eigen::Matrix3d a = hs::build_A(1, params(1.0, 1.0));
  Eigen::Matrix3d want;
  want << 0, 1, 0, -1, 0, -1, 0, 1, -1;
  EXPECT_EQ((a - want).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(hs::build_A(2, params(2.0, 0.5))(1, 2), -4.0);
}

TEST(BuildA, AdjointIsTranspose) {
  for (int n : {1, 3, 17}) {
    const auto p = params(0.7, 1.9);
    EXPECT_EQ((hs::build_Astar(n, p) - hs::build_A(n, p).transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(CharPoly, KnownCoefficients) {
  const auto c = hs::char_poly_coeffs(1, params(1.0, 1.0));
  EXPECT_EQ(c.c3, 1.0);
  EXPECT_EQ(c.c2, 1.0);
  EXPECT_EQ(c.c1, 2.0);
  EXPECT_EQ(c.c0, 1.0);
  EXPECT_DOUBLE_EQ(hs::char_poly_coeffs(3, params(0.5, 2.0)).c1, 13.5);
  EXPECT_DOUBLE_EQ(hs::char_poly_coeffs(5, params(0.5, 2.0)).c0, 625.0);
}

TEST(CharPoly, MatchesDeterminantExpansion) {
  for (int n : {1, 2, 5, 9}) {
    for (double a : {0.5, 2.0}) {
      const auto p = params(1.3, a);
      const auto c = hs::char_poly_coeffs(n, p);
      const auto d = det_coefficients(hs::build_Astar(n, p));
      const double scale = std::pow(n, 4);
      EXPECT_NEAR(c.c3, d[0], 1e-9);
      EXPECT_NEAR(c.c2, d[1], 1e-9 * scale);
      EXPECT_NEAR(c.c1, d[2], 1e-9 * scale);
      EXPECT_NEAR(c.c0, d[3], 1e-9 * scale);
    }
  }
}

TEST(EigenExact, FirstModeAgainstBisection) {
  const auto es = hs::eigen_exact(1, params(1.0, 1.0));
  const auto want = bisection_roots(1.0, 2.0, 1.0);
  EXPECT_NEAR(es.lambda[0].real(), want[0].real(), 1e-12);
  EXPECT_EQ(es.lambda[0].imag(), 0.0);
  EXPECT_NEAR(want[0].real(), -0.5698, 1e-4);
  // lambda[1] has negative imaginary part.
  const cplx minus = want[1].imag() < 0 ? want[1] : want[2];
  EXPECT_LT(std::abs(es.lambda[1] - minus), 1e-12);
  EXPECT_LT(std::abs(es.lambda[2] - std::conj(minus)), 1e-12);
  EXPECT_FALSE(es.degenerate);
}

TEST(EigenExact, TraceAndNegativity) {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double mu : {0.5, 1.0, 2.0}) {
      const auto p = params(mu, a);
      for (int n : {1, 2, 3, 7, 50, 333, 2048}) {
        const auto es = hs::eigen_exact(n, p);
        const cplx tr = es.lambda[0] + es.lambda[1] + es.lambda[2];
        EXPECT_LE(std::abs(tr + double(n) * n), 1e-9 * n * n) << a << ' ' << mu << ' ' << n;
        for (const cplx& l : es.lambda) EXPECT_LT(l.real(), 0.0);
      }
    }
  }
}

TEST(EigenExact, RootsAgainstBisectionOracle) {
  for (int n : {2, 4, 11, 40}) {
    const auto p = params(0.8, 1.6);
    const auto c = hs::char_poly_coeffs(n, p);
    const auto want = bisection_roots(c.c2, c.c1, c.c0);
    const auto es = hs::eigen_exact(n, p);
    const double scale = double(n) * n;
    EXPECT_NEAR(es.lambda[0].real(), want[0].real(), 1e-12 * scale);
    const cplx minus = want[1].imag() < 0 ? want[1] : want[2];
    EXPECT_LT(std::abs(es.lambda[1] - minus), 1e-10 * scale);
  }
}

TEST(EigenExact, LargeModeRealBranch) {
  const auto es = hs::eigen_exact(100, params(1.0, 1.0));
  EXPECT_NEAR(es.lambda[0].real(), -9999.0, 1e-3);
  EXPECT_NEAR(es.real_shift, 1.0, 1e-3);
}

TEST(EigenExact, EigenvectorsOfAdjoint) {
  for (int n : {1, 3, 25}) {
    const auto p = params(1.1, 0.9);
    const auto es = hs::eigen_exact(n, p);
    const Eigen::Matrix3cd m = hs::build_Astar(n, p).cast<cplx>();
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector3cd r = m * es.vectors[j] - es.lambda[j] * es.vectors[j];
      EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-10 * n * n * es.vectors[j].cwiseAbs().maxCoeff());
    }
    EXPECT_NEAR(std::abs(es.vectors[0](2)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(es.vectors[1](0)), 1.0, 1e-14);
  }
}

TEST(EigenExact, ConjugatePairForLargeModes) {
  const auto es = hs::eigen_exact(64, params(1.0, 2.0));
  EXPECT_LT(std::abs(es.lambda[2] - std::conj(es.lambda[1])), 1e-9);
  EXPECT_GT(es.lambda[2].imag(), 0.0);
}

TEST(Gershgorin, UnitParameters) {
  const auto p = params(1.0, 1.0);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(hs::gershgorin_separated(n, p), n >= 4) << n;
  EXPECT_EQ(hs::separation_threshold(p), 4);
  EXPECT_EQ(hs::first_separated_n(p), 4);
}

TEST(Gershgorin, FirstModeNeverSeparated) {
  for (double a : {0.1, 1.0, 5.0}) {
    for (double mu : {0.1, 1.0, 3.0}) EXPECT_FALSE(hs::gershgorin_separated(1, params(mu, a)));
  }
}

TEST(Gershgorin, ScanMatchesInequality) {
  const auto p = params(0.5, 2.0);
  int scan = -1;
  for (int n = 1; n < 1000 && scan < 0; ++n) {
    const auto d = hs::gershgorin(n, p);
    // Heat disk around -n^2 against the two disks centred at 0.
    const double gap = double(n) * n - d.radii[2];
    if (gap > d.radii[0] && gap > d.radii[1]) scan = n;
  }
  EXPECT_EQ(hs::first_separated_n(p), scan);
  EXPECT_EQ(hs::separation_threshold(p), scan);
  // n^2 - mu n > n (1 + a mu) first holds at n = 3 for a = 2, mu = 0.5.
  EXPECT_EQ(scan, 3);
}

TEST(EigenAsymptotic, LeadingForms) {
  for (int n : {1, 7, 100}) {
    const auto p = params(1.3, 0.6);
    const auto as = hs::eigen_asymptotic(n, p);
    EXPECT_DOUBLE_EQ(as.vectors[0](0).real(), -p.a * p.mu / (double(n) * n));
    EXPECT_EQ(as.lambda[1], cplx(-p.a * p.mu * p.mu / 2.0, -n));
    EXPECT_EQ(as.lambda[2], std::conj(as.lambda[1]));
  }
}

TEST(EigenAsymptotic, ResidualDecaysLikeOneOverN) {
  const auto p = params(1.0, 1.0);
  std::vector<double> ns, res;
  double c = 0.0;
  for (int n = 100; n <= 1000; n += 100) {
    const double r = hs::eigen_residuals(n, p, hs::eigen_asymptotic(n, p))[1];
    ns.push_back(n);
    res.push_back(r);
    c = std::max(c, r * n);
  }
  EXPECT_NEAR(hs::loglog_slope(ns, res), -1.0, 0.1);
  EXPECT_LE(hs::eigen_residuals(200, p, hs::eigen_asymptotic(200, p))[1], c / 200.0);
}

TEST(Similarity, ColumnsAreLeadingVectors) {
  const auto p = params(0.9, 2.0);
  const int n = 12;
  const auto tri = hs::similarity(n, p);
  const auto as = hs::eigen_asymptotic(n, p);
  for (int j = 0; j < 3; ++j) {
    EXPECT_LT((tri.C.col(j) - as.vectors[j]).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(tri.D(j), as.lambda[j]);
  }
  EXPECT_LT(max_abs_diff(tri.C * tri.C_inv, Eigen::Matrix3cd::Identity()), 1e-13);
}

TEST(Similarity, ResidualSlope) {
  const auto p = params(1.0, 2.0);
  std::vector<double> ns, res;
  for (int n = 16; n <= 1024; n *= 2) {
    ns.push_back(n);
    res.push_back(hs::similarity_residual(n, p));
  }
  const double slope = hs::loglog_slope(ns, res);
  EXPECT_GE(slope, -1.3);
  EXPECT_LE(slope, -0.7);
}

TEST(Similarity, InverseLeadingTerms) {
  // Entry (1,1) of the exact inverse against -mu / n^2 and entry (1,3)
  // against 1 + 2 a mu^2 / n^2: the next corrections are O(n^-4).
  const auto p = params(1.0, 2.0);
  std::vector<double> ns, d11, d13;
  for (int n = 16; n <= 1024; n *= 2) {
    const auto tri = hs::similarity(n, p);
    const double n2 = double(n) * n;
    ns.push_back(n);
    d11.push_back(std::abs(tri.C_inv(0, 0) - cplx(-p.mu / n2, 0.0)));
    d13.push_back(std::abs(tri.C_inv(0, 2) - cplx(1.0 + 2.0 * p.a * p.mu * p.mu / n2, 0.0)));
  }
  EXPECT_LE(hs::loglog_slope(ns, d11), -3.5);
  EXPECT_LE(hs::loglog_slope(ns, d13), -3.5);
}

TEST(Lyapunov, KnownAndRandom) {
  auto p = params(1.0, 1.0);
  const auto k = hs::lyapunov_rate_check(2, p, Eigen::Vector3d(0.0, 0.0, 1.0));
  EXPECT_DOUBLE_EQ(k.derivative, -8.0);
  EXPECT_DOUBLE_EQ(k.predicted, -8.0);
  const auto z = hs::lyapunov_rate_check(3, p, Eigen::Vector3d(0.4, -1.2, 0.0));
  EXPECT_NEAR(z.derivative, 0.0, 1e-15);

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  p = params(1.7, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector3d y(d(rng), d(rng), d(rng));
    const int n = 1 + trial % 20;
    const auto r = hs::lyapunov_rate_check(n, p, y);
    EXPECT_NEAR(r.derivative, r.predicted, 1e-12 * std::max(1.0, std::abs(r.predicted)));
    EXPECT_NEAR(r.predicted, -(2.0 * n * n / p.a) * y(2) * y(2), 1e-12 * n * n);
  }
}

TEST(Thresholds, UnitParameters) {
  const auto th = hs::thresholds(params(1.0, 1.0), 1.0);
  // max{n0, sqrt 2, 72 * 4, 576 * 4} = 2304.
  EXPECT_EQ(th.N0_floor, 2304);
  EXPECT_GE(th.N0, th.N0_floor);
  EXPECT_DOUBLE_EQ(th.alpha2, 0.25);
  EXPECT_LE(th.alpha, th.alpha2);
  EXPECT_LE(th.alpha, th.alpha1);
  EXPECT_EQ(th.n0_estimate, 4);
}

TEST(Thresholds, Alpha1IsAThirdOfTheSlowestLowMode) {
  const auto p = params(1.0, 1.0);
  const auto th = hs::thresholds(p, 1.0);
  double slowest = 1e300;
  for (int n = 1; n < th.N0; ++n) {
    const auto es = hs::eigen_exact(n, p);
    for (const cplx& l : es.lambda) slowest = std::min(slowest, -l.real());
  }
  EXPECT_NEAR(th.alpha1, slowest / 3.0, 1e-14);
}

TEST(Thresholds, AlphaNeverExceedsAlpha2) {
  for (double theta : {0.3, 1.0, 4.0}) {
    for (double mu : {0.4, 1.0, 2.5}) {
      auto p = params(mu, theta);
      const auto th = hs::thresholds(p, theta);
      EXPECT_DOUBLE_EQ(th.alpha2, mu * mu * theta / 4.0);
      EXPECT_LE(th.alpha, th.alpha2);
      EXPECT_GT(th.alpha, 0.0);
    }
  }
}

TEST(EigenReport, CsvHeader) {
  std::ostringstream os;
  hs::write_eigen_report_csv(os, {hs::eigen_report_row(5, params(1.0, 2.0))});
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "n,re_lambda1,im_lambda1,re_lambda2,im_lambda2,re_lambda3,im_lambda3,"
            "err_lambda1,err_lambda2,err_lambda3,residual_V1,residual_V2,residual_V3,"
            "similarity_residual,condition,separated,degenerate");
}

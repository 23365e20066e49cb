#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "heatstring/errors.hpp"
#include "heatstring/matrix_exp.hpp"

namespace hs = heatstring;

namespace {

// Plain Taylor series with repeated squaring for larger norms.
Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int sq = 0;
  while (norm / std::ldexp(1.0, sq) > 0.1) ++sq;
  const Eigen::MatrixXd x = a / std::ldexp(1.0, sq);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / k;
    sum += term;
  }
  for (int i = 0; i < sq; ++i) sum = sum * sum;
  return sum;
}

// phi_k(z) = int_0^1 e^{(1-s) z} s^{k-1} / (k-1)! ds, by composite Simpson.
std::complex<double> phi_quadrature(std::complex<double> z, int k) {
  const int m = 2000;
  std::complex<double> acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i) / m;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::exp((1.0 - s) * z) * (k == 1 ? 1.0 : s);
  }
  return acc / (3.0 * m);
}

}  // namespace

TEST(Expm, MatchesTaylorOnRandomMatrices) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (double scale : {0.01, 0.4, 3.0, 20.0}) {
    Eigen::MatrixXd a(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) a(i, j) = scale * d(rng);
    }
    const Eigen::MatrixXd got = hs::expm(a);
    const Eigen::MatrixXd want = taylor_expm(a);
    EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, want.cwiseAbs().maxCoeff()))
        << "scale " << scale;
  }
}

TEST(Expm, DiagonalAndRotation) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = -3.0;
  a(1, 1) = 0.5;
  const Eigen::MatrixXd e = hs::expm(a);
  EXPECT_NEAR(e(0, 0), std::exp(-3.0), 1e-15);
  EXPECT_NEAR(e(1, 1), std::exp(0.5), 1e-14);
  Eigen::MatrixXd r(2, 2);
  r << 0.0, 2.0, -2.0, 0.0;
  const Eigen::MatrixXd er = hs::expm(r);
  EXPECT_NEAR(er(0, 0), std::cos(2.0), 1e-14);
  EXPECT_NEAR(er(0, 1), std::sin(2.0), 1e-14);
}

TEST(Expm, ComplexDiagonal) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = {-1.0, 3.0};
  a(1, 1) = {0.0, -0.5};
  const Eigen::MatrixXcd e = hs::expm(a);
  EXPECT_LT(std::abs(e(0, 0) - std::exp(std::complex<double>(-1.0, 3.0))), 1e-14);
  EXPECT_LT(std::abs(e(1, 1) - std::exp(std::complex<double>(0.0, -0.5))), 1e-14);
}

TEST(Expm, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(hs::expm(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 3))), hs::DimensionError);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(hs::expm(a), hs::InstabilityError);
}

TEST(PhiScalar, AgainstQuadrature) {
  for (std::complex<double> z : {std::complex<double>(-3.0, 0.0), std::complex<double>(1e-4, 0.0),
                                 std::complex<double>(-0.5, 2.0), std::complex<double>(0.0, 1e-3),
                                 std::complex<double>(-12.0, 5.0)}) {
    EXPECT_LT(std::abs(hs::phi1(z) - phi_quadrature(z, 1)), 1e-10) << z;
    EXPECT_LT(std::abs(hs::phi2(z) - phi_quadrature(z, 2)), 1e-10) << z;
    if (z.imag() == 0.0) {
      EXPECT_NEAR(hs::phi1(z.real()), phi_quadrature(z, 1).real(), 1e-10);
      EXPECT_NEAR(hs::phi2(z.real()), phi_quadrature(z, 2).real(), 1e-10);
    }
  }
  EXPECT_DOUBLE_EQ(hs::phi1(0.0), 1.0);
  EXPECT_DOUBLE_EQ(hs::phi2(0.0), 0.5);
}

TEST(PhiScalar, ContinuousAcrossSeriesSwitch) {
  // The step across the switch must match the derivative from the series:
  // phi1' = 1/2 + z/3 + z^2/8, phi2' = 1/6 + z/12 + z^2/40.
  for (double z : {1e-3, 1e-2, -1e-3, -1e-2}) {
    const double dz = 2e-9 * z;
    const double d1 = (0.5 + z / 3 + z * z / 8) * dz;
    const double d2 = (1.0 / 6 + z / 12 + z * z / 40) * dz;
    EXPECT_NEAR(hs::phi1(z * (1 + 1e-9)) - hs::phi1(z * (1 - 1e-9)), d1, 1e-13);
    EXPECT_NEAR(hs::phi2(z * (1 + 1e-9)) - hs::phi2(z * (1 - 1e-9)), d2, 1e-13);
  }
}

TEST(PhiMatrices, MatchScalarOnDiagonal) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  z(0, 0) = -2.0;
  z(1, 1) = 0.3;
  z(2, 2) = -25.0;
  const auto pm = hs::phi_matrices(z);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(pm.exp(i, i), std::exp(z(i, i)), 1e-13);
    EXPECT_NEAR(pm.phi1(i, i), hs::phi1(z(i, i)), 1e-13);
    EXPECT_NEAR(pm.phi2(i, i), hs::phi2(z(i, i)), 1e-13);
  }
}

TEST(PhiMatrices, SatisfyRecurrence) {
  // Z phi1(Z) = e^Z - I and Z phi2(Z) = phi1(Z) - I.
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  Eigen::MatrixXd z(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) z(i, j) = d(rng);
  }
  const auto pm = hs::phi_matrices(z);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_LT((z * pm.phi1 - (pm.exp - id)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((z * pm.phi2 - (pm.phi1 - id)).cwiseAbs().maxCoeff(), 1e-13);
}

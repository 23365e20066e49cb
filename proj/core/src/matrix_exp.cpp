#include "heatstring/matrix_exp.hpp"

#include <array>
#include <cmath>

#include "heatstring/errors.hpp"

namespace heatstring {

namespace {

// Coefficients of the [6/6] Pade numerator; the denominator uses alternating signs.
constexpr std::array<double, 7> kPade6 = {
    1.0, 1.0 / 2.0, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};

template <typename Matrix>
Matrix expm_impl(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm needs a square matrix");
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(norm)) throw InstabilityError("expm of a non-finite matrix");

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix x = a / std::ldexp(1.0, squarings);

  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  Matrix power = id;
  Matrix even = kPade6[0] * id;
  Matrix odd = Matrix::Zero(a.rows(), a.cols());
  for (int k = 1; k <= 6; ++k) {
    power = power * x;
    if (k % 2 == 0) {
      even += kPade6[k] * power;
    } else {
      odd += kPade6[k] * power;
    }
  }
  // N = even + odd, D = even - odd.
  Matrix r = (even - odd).partialPivLu().solve(even + odd);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

template <typename Matrix>
PhiMatrices<Matrix> phi_impl(const Matrix& z) {
  if (z.rows() != z.cols()) throw DimensionError("phi_matrices needs a square matrix");
  const Eigen::Index d = z.rows();
  Matrix big = Matrix::Zero(3 * d, 3 * d);
  big.block(0, 0, d, d) = z;
  big.block(0, d, d, d).setIdentity();
  big.block(d, 2 * d, d, d).setIdentity();
  const Matrix e = expm_impl(big);
  return {e.block(0, 0, d, d), e.block(0, d, d, d), e.block(0, 2 * d, d, d)};
}

template <typename T>
T phi1_series(T z) {
  return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
}

template <typename T>
T phi2_series(T z) {
  return 1.0 / 2.0 +
         z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z * (1.0 / 720.0 + z / 5040.0))));
}

// expm1 for complex arguments: e^z - 1 = e^x (cos y - 1) + (e^x - 1) + i e^x sin y,
// with cos y - 1 = -2 sin^2(y/2) to keep accuracy near z = 0.
std::complex<double> cexpm1(std::complex<double> z) {
  const double ex = std::exp(z.real());
  const double s = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) - 2.0 * ex * s * s, ex * std::sin(z.imag())};
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return expm_impl(a); }
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return expm_impl(a); }

PhiMatrices<Eigen::MatrixXd> phi_matrices(const Eigen::MatrixXd& z) { return phi_impl(z); }
PhiMatrices<Eigen::MatrixXcd> phi_matrices(const Eigen::MatrixXcd& z) { return phi_impl(z); }

double phi1(double z) { return std::abs(z) < 1e-3 ? phi1_series(z) : std::expm1(z) / z; }

double phi2(double z) {
  return std::abs(z) < 1e-2 ? phi2_series(z) : (std::expm1(z) - z) / (z * z);
}

std::complex<double> phi1(std::complex<double> z) {
  return std::abs(z) < 1e-3 ? phi1_series(z) : cexpm1(z) / z;
}

std::complex<double> phi2(std::complex<double> z) {
  return std::abs(z) < 1e-2 ? phi2_series(z) : (cexpm1(z) - z) / (z * z);
}

}  // namespace heatstring

#pragma once

// Dense matrix exponential and the phi-functions of exponential integrators.
//   phi1(z) = (e^z - 1) / z,   phi2(z) = (e^z - 1 - z) / z^2

#include <complex>

#include <Eigen/Dense>

namespace heatstring {

// Scaling and squaring with a diagonal [6/6] Pade approximant; the scaled
// matrix has infinity norm <= 1/2, where the Pade truncation error is below
// double round-off.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

template <typename Matrix>
struct PhiMatrices {
  Matrix exp;   // e^Z
  Matrix phi1;  // phi1(Z)
  Matrix phi2;  // phi2(Z)
};

// e^Z, phi1(Z), phi2(Z) for square Z from one exponential of the block matrix
//   [[Z, I, 0], [0, 0, I], [0, 0, 0]].
// Valid for singular and non-diagonalizable Z.
PhiMatrices<Eigen::MatrixXd> phi_matrices(const Eigen::MatrixXd& z);
PhiMatrices<Eigen::MatrixXcd> phi_matrices(const Eigen::MatrixXcd& z);

// Scalar versions, switching to Taylor series near z = 0.
std::complex<double> phi1(std::complex<double> z);
std::complex<double> phi2(std::complex<double> z);
double phi1(double z);
double phi2(double z);

}  // namespace heatstring

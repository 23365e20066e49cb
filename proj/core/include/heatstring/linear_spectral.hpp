#pragma once

// Per-mode linearization about a constant temperature a. In the coordinates
// y = (n u_n, v_n, theta_n) the linear system is y' = A y with
//
//   A = [[0, n, 0], [-n, 0, -mu n], [0, a mu n, -n^2]],   A* = A^T,
//
// and both share the characteristic polynomial
//   p(lambda) = lambda^3 + n^2 lambda^2 + n^2 (a mu^2 + 1) lambda + n^4.

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "heatstring/spectral_core.hpp"

namespace heatstring {

using cplx = std::complex<double>;

Eigen::Matrix3d build_A(int n, const ModelParams& params);
Eigen::Matrix3d build_Astar(int n, const ModelParams& params);

struct CharPoly {
  double c3 = 1.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

CharPoly char_poly_coeffs(int n, const ModelParams& params);

// Horner evaluation of the monic characteristic polynomial.
cplx char_poly_eval(const CharPoly& p, cplx lambda);

enum class Branch { Real, Minus, Plus };

const char* branch_name(Branch b);

// lambda[0] is the real branch (near -n^2), lambda[1] the branch with negative
// imaginary part, lambda[2] its conjugate. vectors[j] is the A* eigenvector of
// lambda[j]: vectors[0] scaled to third entry 1, vectors[1..2] to first entry 1.
struct EigenSystem {
  std::array<cplx, 3> lambda{};
  std::array<Eigen::Vector3cd, 3> vectors{};
  std::array<Branch, 3> labels{Branch::Real, Branch::Minus, Branch::Plus};
  // lambda[0] + n^2, kept separately because it is O(1) while lambda[0] is O(n^2).
  double real_shift = 0.0;
  // Set when all three roots are real; lambda[1..2] are then ordered by real part.
  bool degenerate = false;
  // Infinity-norm condition number of [V1 V2 V3]; inf when singular.
  double condition = 0.0;
  // Largest |p(lambda_j)| after polishing.
  double residual = 0.0;
};

// Closed-form cubic roots polished by Newton's method; eigenvectors from the
// null space of A* - lambda I. ConditioningError when |p(lambda)| cannot be
// pushed below 1e-9 max(1, n^4).
EigenSystem eigen_exact(int n, const ModelParams& params);

struct GershgorinDisks {
  std::array<cplx, 3> centers{};
  std::array<double, 3> radii{};
};

// Row disks of A*.
GershgorinDisks gershgorin(int n, const ModelParams& params);

// The disk around -n^2 is disjoint from the two disks around 0:
// n^2 - mu n > n (1 + a mu).
bool gershgorin_separated(int n, const ModelParams& params);

// Smallest separated n found by scanning 1..n_max, or -1.
int first_separated_n(const ModelParams& params, int n_max = 1 << 20);

// Smallest integer n > 1 + a mu + mu.
int separation_threshold(const ModelParams& params);

// Leading-order eigenpairs:
//   lambda = (-n^2 + a mu^2, -n i - a mu^2/2, n i - a mu^2/2)
//   V1 = (-a mu/n^2, -a mu/n, 1 - a mu^2/n^2)
//   V2 = (1, i + a mu^2/(2n), -mu i/n + mu/n^2 - a mu^3/(2n^2)),  V3 = conj(V2)
EigenSystem eigen_asymptotic(int n, const ModelParams& params);

struct SimilarityTriple {
  Eigen::Matrix3cd C;      // columns V1, V2, V3 of eigen_asymptotic
  Eigen::Vector3cd D;      // diagonal of D_n
  Eigen::Matrix3cd C_inv;  // exact inverse of C
};

// SingularityError when C is numerically singular.
SimilarityTriple similarity(int n, const ModelParams& params);

// Infinity norm of A* - C D C^{-1}.
double similarity_residual(int n, const ModelParams& params);

struct LyapunovCheck {
  double energy = 0.0;       // |y1|^2 + |y2|^2 + |y3|^2 / a
  double derivative = 0.0;   // grad E . (A y)
  double predicted = 0.0;    // -(2 n^2 / a) y3^2
};

LyapunovCheck lyapunov_rate_check(int n, const ModelParams& params, const Eigen::Vector3d& y);

struct Thresholds {
  int n0_estimate = 0;  // first Gershgorin-separated n at a = theta_inf
  int N0_floor = 0;     // ceiling of the four arithmetic clauses
  int N0 = 0;           // floor raised until the spectral and |C| clauses hold
  double alpha1 = 0.0;
  int alpha1_mode = 0;  // n attaining the minimum in alpha1
  double alpha2 = 0.0;
  double alpha = 0.0;
};

// Mode matrices are taken at a = theta_inf. The spectral clauses are checked on
// n in [N0, 2 * N0_floor].
Thresholds thresholds(const ModelParams& params, double theta_inf);

struct EigenReportRow {
  int n = 0;
  std::array<cplx, 3> lambda{};
  double err_lambda1 = 0.0;  // |lambda1 - (-n^2 + a mu^2)|
  double err_lambda2 = 0.0;
  double err_lambda3 = 0.0;
  double residual_V1 = 0.0;  // ||A* V - lambda V||_inf for the asymptotic pairs
  double residual_V2 = 0.0;
  double residual_V3 = 0.0;
  double similarity_residual = 0.0;  // NaN when C is singular
  double condition = 0.0;
  bool separated = false;
  bool degenerate = false;
};

EigenReportRow eigen_report_row(int n, const ModelParams& params);

void write_eigen_report_csv(std::ostream& os, const std::vector<EigenReportRow>& rows);

// ||A* V_j - lambda_j V_j||_inf of an eigen system against A*_{n,a}.
std::array<double, 3> eigen_residuals(int n, const ModelParams& params, const EigenSystem& es);

}  // namespace heatstring

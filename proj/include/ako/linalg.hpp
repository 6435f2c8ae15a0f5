#ifndef AKO_LINALG_HPP
#define AKO_LINALG_HPP

#include <Eigen/Dense>

#include "ako/rng.hpp"

namespace ako {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Covariance {
  int dim = 0;
  Matrix entries;
};

struct CholeskyFactor {
  int dim = 0;
  Matrix lower;
};

// Sigma_ij = rho^|i-j|; rho in [0,1), p >= 1.
Covariance toeplitz_covariance(double rho, int p);

// Lower-triangular L with L*L^T = sigma. Throws std::runtime_error naming the
// failing pivot when sigma is not positive definite.
CholeskyFactor cholesky(const Covariance& sigma);

// Positive-semidefinite variant: pivots below tol are zeroed out instead of
// failing, so degenerate conditionals (e.g. s = 0) factor cleanly.
CholeskyFactor cholesky_psd(const Matrix& a, double tol = 1e-10);

// n i.i.d. rows from N(mean, L*L^T); normals are drawn row-major so the
// output depends only on (mean, chol, n, rng).
Matrix sample_mvn(const Vector& mean, const CholeskyFactor& chol, int n,
                  RngStream& rng);

// Smallest eigenvalue of a symmetric matrix (dense self-adjoint solver).
double min_eigenvalue(const Matrix& a);

}  // namespace ako

#endif  // AKO_LINALG_HPP

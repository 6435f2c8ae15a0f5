#include "ako/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ako {

Covariance toeplitz_covariance(double rho, int p) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error("toeplitz_covariance: rho must be in [0, 1)");
  if (p < 1) throw std::domain_error("toeplitz_covariance: p must be >= 1");
  Matrix sigma(p, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i)
      sigma(i, j) = std::pow(rho, std::abs(i - j));
  return Covariance{p, std::move(sigma)};
}

CholeskyFactor cholesky(const Covariance& sigma) {
  const int p = sigma.dim;
  Matrix lower = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    double d = sigma.entries(j, j) - lower.row(j).head(j).squaredNorm();
    if (d <= 0.0)
      throw std::runtime_error("cholesky: matrix not positive definite at pivot " +
                               std::to_string(j));
    lower(j, j) = std::sqrt(d);
    for (int i = j + 1; i < p; ++i) {
      const double off =
          sigma.entries(i, j) -
          lower.row(i).head(j).dot(lower.row(j).head(j));
      lower(i, j) = off / lower(j, j);
    }
  }
  return CholeskyFactor{p, std::move(lower)};
}

CholeskyFactor cholesky_psd(const Matrix& a, double tol) {
  const int p = static_cast<int>(a.rows());
  Matrix lower = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    double d = a(j, j) - lower.row(j).head(j).squaredNorm();
    if (d < -tol)
      throw std::runtime_error("cholesky_psd: matrix indefinite at pivot " +
                               std::to_string(j));
    if (d <= tol) {
      // Rank-deficient direction; the whole column contributes nothing.
      continue;
    }
    lower(j, j) = std::sqrt(d);
    for (int i = j + 1; i < p; ++i) {
      const double off =
          a(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j));
      lower(i, j) = off / lower(j, j);
    }
  }
  return CholeskyFactor{p, std::move(lower)};
}

Matrix sample_mvn(const Vector& mean, const CholeskyFactor& chol, int n,
                  RngStream& rng) {
  const int p = chol.dim;
  if (mean.size() != p)
    throw std::invalid_argument("sample_mvn: mean length does not match factor dim");
  if (n < 1) throw std::invalid_argument("sample_mvn: n must be >= 1");
  Matrix z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) z(i, j) = rng.normal();
  Matrix x = z * chol.lower.transpose();
  x.rowwise() += mean.transpose();
  return x;
}

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace ako

#include "ako/knockoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ako {

Vector equicorrelated_s(const Covariance& sigma_corr) {
  const int p = sigma_corr.dim;
  for (int j = 0; j < p; ++j) {
    if (std::abs(sigma_corr.entries(j, j) - 1.0) > 1e-8)
      throw std::domain_error("equicorrelated_s: matrix must have unit diagonal");
  }
  const double lambda_min = min_eigenvalue(sigma_corr.entries);
  if (lambda_min <= 1e-10)
    throw std::domain_error("equicorrelated_s: matrix not positive definite");
  const double s = std::min(2.0 * lambda_min, 1.0) * (1.0 - 1e-8);
  return Vector::Constant(p, s);
}

GaussianModel make_gaussian_model_with_s(const Vector& mean,
                                         const Covariance& sigma,
                                         const Vector& s_cov) {
  const int p = sigma.dim;
  if (mean.size() != p || s_cov.size() != p)
    throw std::invalid_argument("make_gaussian_model_with_s: dimension mismatch");

  Eigen::LDLT<Matrix> ldlt(sigma.entries);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("make_gaussian_model_with_s: covariance factorization failed");

  Matrix inv_sigma_d = ldlt.solve(Matrix(s_cov.asDiagonal()));
  Matrix cond = 2.0 * Matrix(s_cov.asDiagonal()) -
                s_cov.asDiagonal() * inv_sigma_d;
  cond = 0.5 * (cond + cond.transpose()).eval();

  CholeskyFactor cond_chol;
  try {
    cond_chol = cholesky_psd(cond, 1e-8);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(
        std::string("knockoff conditional covariance is not PSD: ") + e.what());
  }
  return GaussianModel{mean, sigma, s_cov, std::move(inv_sigma_d),
                       std::move(cond_chol)};
}

GaussianModel make_gaussian_model(const Vector& mean, const Covariance& sigma) {
  const int p = sigma.dim;
  Vector sd(p);
  for (int j = 0; j < p; ++j) {
    const double v = sigma.entries(j, j);
    if (v <= 0.0)
      throw std::domain_error("make_gaussian_model: non-positive variance at column " +
                              std::to_string(j));
    sd[j] = std::sqrt(v);
  }
  // Equicorrelated s is defined on the correlation matrix; map back by the
  // variances afterwards.
  Covariance corr{p, sd.cwiseInverse().asDiagonal() * sigma.entries *
                         sd.cwiseInverse().asDiagonal()};
  for (int j = 0; j < p; ++j) corr.entries(j, j) = 1.0;
  Vector s_corr = equicorrelated_s(corr);
  Vector s_cov = s_corr.cwiseProduct(sd.cwiseProduct(sd));
  return make_gaussian_model_with_s(mean, sigma, s_cov);
}

GaussianModel estimate_gaussian(const Matrix& x,
                                std::optional<double> shrinkage) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (n < 2 || p < 1)
    throw std::invalid_argument("estimate_gaussian: need n >= 2 and p >= 1");
  if (shrinkage && !(*shrinkage >= 0.0 && *shrinkage <= 1.0))
    throw std::invalid_argument("estimate_gaussian: shrinkage must be in [0, 1]");

  Vector mean = x.colwise().mean();
  Matrix centered = x.rowwise() - mean.transpose();
  Vector sd(p);
  for (int j = 0; j < p; ++j) {
    sd[j] = std::sqrt(centered.col(j).squaredNorm() / (n - 1));
    if (sd[j] < 1e-12)
      throw std::invalid_argument("estimate_gaussian: degenerate feature (zero variance) at column " +
                                  std::to_string(j));
  }
  Matrix w = centered * sd.cwiseInverse().asDiagonal();  // standardized
  Matrix r_hat = (w.transpose() * w) / (n - 1);
  for (int j = 0; j < p; ++j) r_hat(j, j) = 1.0;

  double eta;
  if (shrinkage) {
    eta = *shrinkage;
  } else {
    // Closed-form shrinkage toward the identity target: the ratio of the
    // summed sampling variances of the off-diagonal correlations to their
    // summed squares (Ledoit-Wolf / Schafer-Strimmer form).
    double var_sum = 0.0, sq_sum = 0.0;
    for (int j = 0; j < p; ++j) {
      for (int k = j + 1; k < p; ++k) {
        const auto prod = w.col(j).cwiseProduct(w.col(k));
        const double pm = prod.mean();
        const double var_w = (prod.array() - pm).square().sum();
        var_sum += static_cast<double>(n) / ((n - 1.0) * (n - 1.0) * (n - 1.0)) * var_w;
        sq_sum += r_hat(j, k) * r_hat(j, k);
      }
    }
    eta = sq_sum > 0.0 ? std::clamp(var_sum / sq_sum, 0.0, 1.0) : 1.0;
  }

  Matrix r = (1.0 - eta) * r_hat + eta * Matrix::Identity(p, p);
  Covariance sigma{p, sd.asDiagonal() * r * sd.asDiagonal()};
  Covariance corr{p, std::move(r)};
  Vector s_corr = equicorrelated_s(corr);
  Vector s_cov = s_corr.cwiseProduct(sd.cwiseProduct(sd));
  return make_gaussian_model_with_s(mean, sigma, s_cov);
}

KnockoffCopy sample_knockoffs(const Matrix& x, const GaussianModel& model,
                              RngStream& rng, int bootstrap_id) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (p != model.sigma.dim)
    throw std::invalid_argument("sample_knockoffs: model dimension mismatch");

  // Row form of the conditional mean: x - (x - mu) Sigma^{-1} D.
  Matrix centered = x.rowwise() - model.mean.transpose();
  Matrix cond_mean = x - centered * model.inv_sigma_d;

  Matrix z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) z(i, j) = rng.normal();
  Matrix x_tilde = cond_mean + z * model.conditional_chol.lower.transpose();
  return KnockoffCopy{std::move(x_tilde), bootstrap_id};
}

}  // namespace ako

#ifndef AKO_KNOCKOFFS_HPP
#define AKO_KNOCKOFFS_HPP

#include <optional>

#include "ako/linalg.hpp"
#include "ako/rng.hpp"

namespace ako {

// Second-order Gaussian knockoff model. The conditional law of a knockoff row
// given an observed row x is
//   N( x - (x - mu) Sigma^{-1} D ,  2D - D Sigma^{-1} D ),   D = diag(s),
// with s the equicorrelated diagonal mapped back to covariance scale.
struct GaussianModel {
  Vector mean;
  Covariance sigma;
  Vector s;                       // covariance-scale diagonal of D
  Matrix inv_sigma_d;             // Sigma^{-1} D
  CholeskyFactor conditional_chol;  // factor of 2D - D Sigma^{-1} D
};

struct KnockoffCopy {
  Matrix x_tilde;
  int bootstrap_id = 0;
};

// s_j = min(2 lambda_min, 1) * (1 - 1e-8) on a unit-diagonal (correlation)
// matrix; the slack keeps the joint matrix off the PSD boundary.
Vector equicorrelated_s(const Covariance& sigma_corr);

// Oracle mode: build the model from a known (mean, Sigma).
GaussianModel make_gaussian_model(const Vector& mean, const Covariance& sigma);

// Same, but with the covariance-scale diagonal s forced by the caller.
GaussianModel make_gaussian_model_with_s(const Vector& mean,
                                         const Covariance& sigma,
                                         const Vector& s_cov);

// Estimated mode: column means plus a shrunk empirical correlation,
// (1 - eta) * R_hat + eta * I, rescaled by the column standard deviations.
// eta comes from the Ledoit-Wolf-style closed form when not given.
GaussianModel estimate_gaussian(const Matrix& x,
                                std::optional<double> shrinkage = std::nullopt);

KnockoffCopy sample_knockoffs(const Matrix& x, const GaussianModel& model,
                              RngStream& rng, int bootstrap_id = 0);

}  // namespace ako

#endif  // AKO_KNOCKOFFS_HPP

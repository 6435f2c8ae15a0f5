#ifndef AKO_LASSO_HPP
#define AKO_LASSO_HPP

#include "ako/linalg.hpp"
#include "ako/rng.hpp"

namespace ako {

struct LassoFit {
  Vector beta;
  double lambda = 0.0;
  int n_iters = 0;  // full coordinate sweeps
  bool converged = false;
};

// Smallest lambda whose (1/2)||y - z beta||^2 + lambda ||beta||_1 solution is
// identically zero: max_j |z_j^T y|. Assumes centered inputs.
double lambda_max(const Matrix& z, const Vector& y);

// Cyclic coordinate descent with soft thresholding. Columns need not be unit
// norm. Convergence: max absolute coefficient update in a full sweep <= tol.
LassoFit lasso_cd(const Matrix& z, const Vector& y, double lambda,
                  double tol = 1e-7, int max_iter = 10000,
                  const Vector* warm_start = nullptr);

// K-fold cross-validation over a geometric grid from lambda_max down to
// grid_ratio * lambda_max; returns the grid value minimizing mean held-out
// squared error. Fold assignment is drawn from rng, so the choice is a pure
// function of the inputs and the stream.
double select_lambda_cv(const Matrix& z, const Vector& y, int folds,
                        int grid_size, double grid_ratio, RngStream& rng);

inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace ako

#endif  // AKO_LASSO_HPP

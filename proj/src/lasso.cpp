#include "ako/lasso.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ako {

double lambda_max(const Matrix& z, const Vector& y) {
  if (z.rows() != y.size())
    throw std::invalid_argument("lambda_max: row count mismatch");
  if (z.cols() == 0) return 0.0;
  return (z.transpose() * y).cwiseAbs().maxCoeff();
}

namespace {

// One sweep over the given coordinates; returns the max |delta beta|.
double sweep(const Matrix& z, const Vector& col_sq, double lambda,
             Vector& beta, Vector& r, const std::vector<int>& coords) {
  double max_delta = 0.0;
  for (int j : coords) {
    if (col_sq[j] <= 0.0) continue;
    const double old = beta[j];
    const double rho = z.col(j).dot(r) + col_sq[j] * old;
    const double updated = soft_threshold(rho, lambda) / col_sq[j];
    if (updated != old) {
      r -= (updated - old) * z.col(j);
      beta[j] = updated;
      const double d = std::abs(updated - old);
      if (d > max_delta) max_delta = d;
    }
  }
  return max_delta;
}

}  // namespace

LassoFit lasso_cd(const Matrix& z, const Vector& y, double lambda, double tol,
                  int max_iter, const Vector* warm_start) {
  const int q = static_cast<int>(z.cols());
  if (z.rows() != y.size())
    throw std::invalid_argument("lasso_cd: row count mismatch");
  if (!z.allFinite() || !y.allFinite())
    throw std::invalid_argument("lasso_cd: non-finite values in inputs");
  if (lambda < 0.0) throw std::invalid_argument("lasso_cd: lambda must be >= 0");

  Vector col_sq = z.colwise().squaredNorm();
  Vector beta = warm_start ? *warm_start : Vector::Zero(q);
  Vector r = warm_start ? Vector(y - z * beta) : y;

  std::vector<int> all(q);
  for (int j = 0; j < q; ++j) all[j] = j;
  std::vector<int> active;
  active.reserve(q);

  LassoFit fit;
  fit.lambda = lambda;
  int iters = 0;
  while (iters < max_iter) {
    const double full_delta = sweep(z, col_sq, lambda, beta, r, all);
    ++iters;
    if (full_delta <= tol) {
      fit.converged = true;
      break;
    }
    // Iterate the active set to convergence before the next full sweep.
    active.clear();
    for (int j = 0; j < q; ++j)
      if (beta[j] != 0.0) active.push_back(j);
    while (iters < max_iter) {
      const double d = sweep(z, col_sq, lambda, beta, r, active);
      ++iters;
      if (d <= tol) break;
    }
  }
  fit.beta = std::move(beta);
  fit.n_iters = iters;
  return fit;
}

double select_lambda_cv(const Matrix& z, const Vector& y, int folds,
                        int grid_size, double grid_ratio, RngStream& rng) {
  const int n = static_cast<int>(z.rows());
  const int q = static_cast<int>(z.cols());
  if (folds < 2) throw std::invalid_argument("select_lambda_cv: folds must be >= 2");
  if (n < folds)
    throw std::invalid_argument("select_lambda_cv: fewer rows than folds");
  if (grid_size < 1 || !(grid_ratio > 0.0 && grid_ratio <= 1.0))
    throw std::invalid_argument("select_lambda_cv: invalid grid");

  const double lmax = lambda_max(z, y);
  if (lmax <= 0.0) return 0.0;
  std::vector<double> grid(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const double frac = grid_size == 1 ? 0.0 : static_cast<double>(i) / (grid_size - 1);
    grid[i] = lmax * std::pow(grid_ratio, frac);
  }

  std::vector<int> fold_of(n);
  {
    std::vector<int> perm = rng.permutation(n);
    for (int i = 0; i < n; ++i) fold_of[perm[i]] = i % folds;
  }

  std::vector<double> err(grid_size, 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train, test;
    for (int i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
    Matrix z_train(train.size(), q), z_test(test.size(), q);
    Vector y_train(train.size()), y_test(test.size());
    for (size_t i = 0; i < train.size(); ++i) {
      z_train.row(i) = z.row(train[i]);
      y_train[i] = y[train[i]];
    }
    for (size_t i = 0; i < test.size(); ++i) {
      z_test.row(i) = z.row(test[i]);
      y_test[i] = y[test[i]];
    }
    // Warm-started descent down the grid.
    Vector warm = Vector::Zero(q);
    for (int i = 0; i < grid_size; ++i) {
      LassoFit fit = lasso_cd(z_train, y_train, grid[i], 1e-6, 2000, &warm);
      warm = fit.beta;
      err[i] += (y_test - z_test * warm).squaredNorm();
    }
  }

  int best = 0;
  for (int i = 1; i < grid_size; ++i)
    if (err[i] < err[best]) best = i;
  return grid[best];
}

}  // namespace ako

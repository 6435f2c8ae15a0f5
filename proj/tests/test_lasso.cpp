#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ako/lasso.hpp"

using namespace ako;

namespace {

Matrix random_matrix(int n, int q, RngStream& rng) {
  Matrix z(n, q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < q; ++j) z(i, j) = rng.normal();
  return z;
}

void center(Matrix& z, Vector& y) {
  z.rowwise() -= z.colwise().mean().eval();
  y.array() -= y.mean();
}

// Stationarity residual of the (1/2)||y - z b||^2 + lambda ||b||_1 problem.
double kkt_violation(const Matrix& z, const Vector& y, const Vector& beta,
                     double lambda) {
  Vector r = y - z * beta;
  Vector corr = z.transpose() * r;
  double worst = 0.0;
  for (int j = 0; j < beta.size(); ++j) {
    const double v = beta[j] == 0.0
                         ? std::max(0.0, std::abs(corr[j]) - lambda)
                         : std::abs(corr[j] - lambda * (beta[j] > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

double objective(const Matrix& z, const Vector& y, const Vector& beta,
                 double lambda) {
  return 0.5 * (y - z * beta).squaredNorm() + lambda * beta.lpNorm<1>();
}

}  // namespace

TEST_CASE("lambda_max examples") {
  SUBCASE("orthogonal response gives zero") {
    Matrix z(2, 1);
    z << 1, 0;
    Vector y(2);
    y << 0, 3;
    CHECK(lambda_max(z, y) == 0.0);
  }
  SUBCASE("single column") {
    Matrix z(3, 1);
    z << 1, 1, 1;
    Vector y(3);
    y << 1, 1, 1;
    CHECK(lambda_max(z, y) == doctest::Approx(3.0));
  }
  SUBCASE("above lambda_max the solution is exactly zero") {
    RngStream rng = derive_stream(10, 0);
    Matrix z = random_matrix(40, 12, rng);
    Vector y = random_matrix(40, 1, rng).col(0);
    center(z, y);
    LassoFit fit = lasso_cd(z, y, 1.001 * lambda_max(z, y));
    CHECK(fit.converged);
    CHECK(fit.beta.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("orthonormal design matches the soft-threshold closed form") {
  // Oracle: with z^T z = I the minimizer is soft_threshold(z_j^T y, lambda).
  const int n = 20;
  Matrix z = Matrix::Identity(n, 6);
  RngStream rng = derive_stream(10, 1);
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal() * 2.0;
  for (double lambda : {0.1, 0.5, 1.5}) {
    LassoFit fit = lasso_cd(z, y, lambda, 1e-12);
    for (int j = 0; j < 6; ++j)
      CHECK(fit.beta[j] ==
            doctest::Approx(soft_threshold(z.col(j).dot(y), lambda)).epsilon(1e-8));
  }
}

TEST_CASE("tiny lambda approaches least squares") {
  RngStream rng = derive_stream(10, 2);
  Matrix z = random_matrix(60, 8, rng);
  Vector y = random_matrix(60, 1, rng).col(0);
  center(z, y);
  Vector ls = (z.transpose() * z).ldlt().solve(z.transpose() * y);
  LassoFit fit = lasso_cd(z, y, 1e-12, 1e-10, 50000);
  CHECK((fit.beta - ls).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("KKT residuals hold on converged fits") {
  RngStream rng = derive_stream(10, 3);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 30 + static_cast<int>(rng.uniform_below(40));
    const int q = 5 + static_cast<int>(rng.uniform_below(40));
    Matrix z = random_matrix(n, q, rng);
    Vector y = random_matrix(n, 1, rng).col(0);
    center(z, y);
    const double lambda = 0.05 * lambda_max(z, y) * (1.0 + rng.uniform());
    LassoFit fit = lasso_cd(z, y, lambda);
    REQUIRE(fit.converged);
    CHECK(kkt_violation(z, y, fit.beta, lambda) < 1e-5);
  }
}

TEST_CASE("objective is non-increasing across sweeps") {
  // Re-runs coordinate descent one sweep at a time via warm starts.
  RngStream rng = derive_stream(10, 4);
  Matrix z = random_matrix(50, 20, rng);
  Vector y = random_matrix(50, 1, rng).col(0);
  center(z, y);
  const double lambda = 0.1 * lambda_max(z, y);
  Vector beta = Vector::Zero(20);
  double prev = objective(z, y, beta, lambda);
  for (int sweep = 0; sweep < 15; ++sweep) {
    LassoFit fit = lasso_cd(z, y, lambda, 0.0, 1, &beta);
    beta = fit.beta;
    const double obj = objective(z, y, beta, lambda);
    CHECK(obj <= prev + 1e-12);
    prev = obj;
  }
}

TEST_CASE("permutation equivariance") {
  RngStream rng = derive_stream(10, 5);
  Matrix z = random_matrix(40, 10, rng);
  Vector y = random_matrix(40, 1, rng).col(0);
  center(z, y);
  const double lambda = 0.2 * lambda_max(z, y);
  LassoFit base = lasso_cd(z, y, lambda, 1e-10);

  std::vector<int> perm = rng.permutation(10);
  Matrix zp(40, 10);
  for (int j = 0; j < 10; ++j) zp.col(j) = z.col(perm[j]);
  LassoFit fit = lasso_cd(zp, y, lambda, 1e-10);
  for (int j = 0; j < 10; ++j)
    CHECK(fit.beta[j] == doctest::Approx(base.beta[perm[j]]).epsilon(1e-6));
}

TEST_CASE("NaN input is a data error") {
  Matrix z = Matrix::Ones(4, 2);
  z(1, 1) = std::nan("");
  Vector y = Vector::Ones(4);
  CHECK_THROWS_AS(lasso_cd(z, y, 0.1), std::invalid_argument);
}

TEST_CASE("select_lambda_cv") {
  SUBCASE("deterministic given the stream") {
    RngStream data = derive_stream(11, 0);
    Matrix z = random_matrix(80, 20, data);
    Vector y = random_matrix(80, 1, data).col(0);
    center(z, y);
    RngStream r1 = derive_stream(11, 1);
    RngStream r2 = derive_stream(11, 1);
    CHECK(select_lambda_cv(z, y, 5, 40, 0.01, r1) ==
          select_lambda_cv(z, y, 5, 40, 0.01, r2));
  }
  SUBCASE("fewer rows than folds is a configuration error") {
    Matrix z = Matrix::Ones(3, 2);
    Vector y = Vector::Ones(3);
    RngStream rng = derive_stream(11, 2);
    CHECK_THROWS_AS(select_lambda_cv(z, y, 5, 10, 0.01, rng),
                    std::invalid_argument);
  }
  SUBCASE("pure noise picks a lambda in the upper half of the grid") {
    // Statistical check; majority over repeated seeds.
    int upper = 0;
    const int trials = 11;
    for (int t = 0; t < trials; ++t) {
      RngStream data = derive_stream(12, t);
      Matrix z = random_matrix(200, 50, data);
      Vector y = random_matrix(200, 1, data).col(0);
      center(z, y);
      RngStream cv = derive_stream(13, t);
      const double lam = select_lambda_cv(z, y, 5, 50, 0.01, cv);
      const double mid = lambda_max(z, y) * std::pow(0.01, 0.5);
      if (lam >= mid) ++upper;
    }
    CHECK(upper > trials / 2);
  }
  SUBCASE("strong single signal gets the largest refit coefficient") {
    int hits = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      RngStream data = derive_stream(14, t);
      Matrix z = random_matrix(100, 20, data);
      Vector noise = random_matrix(100, 1, data).col(0);
      Vector y = 10.0 * z.col(3) + noise;  // SNR ~ 10
      center(z, y);
      RngStream cv = derive_stream(15, t);
      const double lam = select_lambda_cv(z, y, 5, 50, 0.01, cv);
      LassoFit fit = lasso_cd(z, y, lam);
      int argmax = 0;
      fit.beta.cwiseAbs().maxCoeff(&argmax);
      if (argmax == 3) ++hits;
    }
    CHECK(hits > trials / 2);
  }
}

#include "ako/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ako {

Vector quantile_aggregate(const Matrix& pvals, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("quantile_aggregate: gamma must be in (0, 1]");
  const int b = static_cast<int>(pvals.rows());
  const int p = static_cast<int>(pvals.cols());
  if (b < 1) throw std::invalid_argument("quantile_aggregate: empty p-value matrix");
  if ((pvals.array() <= 0.0).any() || (pvals.array() > 1.0).any())
    throw std::invalid_argument("quantile_aggregate: p-values must be in (0, 1]");

  const int k = static_cast<int>(std::ceil(gamma * b));  // order statistic index
  Vector pi_bar(p);
  std::vector<double> col(b);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < b; ++i) col[i] = pvals(i, j);
    std::nth_element(col.begin(), col.begin() + (k - 1), col.end());
    pi_bar[j] = std::min(1.0, col[k - 1] / gamma);
  }
  return pi_bar;
}

namespace {

StepUpResult step_up(const Vector& pvals, double effective_alpha) {
  const int p = static_cast<int>(pvals.size());
  std::vector<double> sorted(pvals.data(), pvals.data() + p);
  std::sort(sorted.begin(), sorted.end());

  int k_hat = 0;
  for (int k = p; k >= 1; --k) {
    if (sorted[k - 1] <= k * effective_alpha / p) {
      k_hat = k;
      break;
    }
  }
  StepUpResult res;
  if (k_hat == 0) return res;
  res.k_hat = k_hat;
  const double cutoff = sorted[k_hat - 1];
  for (int j = 0; j < p; ++j)
    if (pvals[j] <= cutoff) res.selected.push_back(j);
  return res;
}

}  // namespace

StepUpResult bh_select(const Vector& pvals, double alpha) {
  return step_up(pvals, alpha);
}

StepUpResult by_select(const Vector& pvals, double alpha) {
  const int p = static_cast<int>(pvals.size());
  double harmonic = 0.0;
  for (int i = 1; i <= p; ++i) harmonic += 1.0 / i;
  return step_up(pvals, alpha / harmonic);
}

KnockoffRun run_bootstrap(const Matrix& x, const Vector& y,
                          const GaussianModel& model, RngStream& rng,
                          int bootstrap_id, const AkoConfig& config) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  KnockoffCopy ko = sample_knockoffs(x, model, rng, bootstrap_id);

  Matrix z(n, 2 * p);
  z.leftCols(p) = x;
  z.rightCols(p) = ko.x_tilde;
  z.rowwise() -= z.colwise().mean().eval();
  Vector yc = y.array() - y.mean();

  // Pair-symmetric scaling: column j and its knockoff share one factor, so
  // swapping them leaves the scaled design's geometry intact and W unbiased.
  for (int j = 0; j < p; ++j) {
    const double scale = std::sqrt(
        0.5 * (z.col(j).squaredNorm() + z.col(j + p).squaredNorm()));
    if (scale > 0.0) {
      z.col(j) /= scale;
      z.col(j + p) /= scale;
    }
  }

  double lambda;
  if (config.fixed_lambda) {
    lambda = *config.fixed_lambda;
  } else {
    lambda = select_lambda_cv(z, yc, config.cv_folds, config.cv_grid_size,
                              config.cv_grid_ratio, rng);
  }
  LassoFit fit = lasso_cd(z, yc, lambda);

  KnockoffStats stats = lcd_statistic(fit.beta, bootstrap_id);
  IntermediatePValues pi = intermediate_pvalues(stats, config.offset_c);
  return KnockoffRun{bootstrap_id, std::move(stats.w), std::move(pi.pi), lambda,
                     fit.converged};
}

AggregationResult run_ako(const Matrix& x, const Vector& y,
                          const GaussianModel& model, const AkoConfig& config) {
  if (config.n_bootstraps < 1)
    throw std::invalid_argument("run_ako: need at least one bootstrap");
  if (!(config.gamma > 0.0 && config.gamma <= 1.0))
    throw std::invalid_argument("run_ako: gamma must be in (0, 1]");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw std::invalid_argument("run_ako: alpha must be in (0, 1)");

  const int b_total = config.n_bootstraps;
  const int p = static_cast<int>(x.cols());
  std::vector<KnockoffRun> runs(b_total);

  // Bootstrap b owns stream (master_seed, b+1); results land in slot b, so
  // the output does not depend on the worker count.
  const int threads = std::max(1, config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int b = 0; b < b_total; ++b) {
    RngStream stream = derive_stream(config.master_seed, b + 1);
    runs[b] = run_bootstrap(x, y, model, stream, b + 1, config);
  }

  Matrix pvals(b_total, p);
  for (int b = 0; b < b_total; ++b) pvals.row(b) = runs[b].pi;
  Vector pi_bar = quantile_aggregate(pvals, config.gamma);

  double alpha = config.alpha;
  if (config.kappa_correct) alpha /= kappa_constant();
  StepUpResult sel = config.fdr_method == FdrMethod::BH
                         ? bh_select(pi_bar, alpha)
                         : by_select(pi_bar, alpha);

  return AggregationResult{std::move(pi_bar), sel.k_hat, std::move(sel.selected),
                           std::move(runs)};
}

VanillaResult run_vanilla(const Matrix& x, const Vector& y,
                          const GaussianModel& model, const AkoConfig& config) {
  RngStream stream = derive_stream(config.master_seed, 1);
  KnockoffRun run = run_bootstrap(x, y, model, stream, 1, config);
  KnockoffStats stats{run.w, run.bootstrap_id};
  double alpha = config.alpha;
  if (config.kappa_correct) alpha /= kappa_constant();
  VanillaResult res;
  res.threshold = knockoff_threshold(stats, alpha);
  res.selected = vanilla_select(stats, alpha);
  res.w = std::move(run.w);
  res.lambda = run.lambda;
  return res;
}

}  // namespace ako

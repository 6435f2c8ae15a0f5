#ifndef AKO_AGGREGATION_HPP
#define AKO_AGGREGATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ako/inference.hpp"
#include "ako/knockoffs.hpp"
#include "ako/lasso.hpp"

namespace ako {

enum class FdrMethod { BH, BY };

struct AkoConfig {
  int n_bootstraps = 25;
  double gamma = 0.3;
  double alpha = 0.1;
  FdrMethod fdr_method = FdrMethod::BH;
  double offset_c = 1.0;
  std::uint64_t master_seed = 0;
  std::optional<double> fixed_lambda;  // CV when absent
  bool kappa_correct = false;          // replace alpha by alpha / kappa
  int cv_folds = 5;
  int cv_grid_size = 100;
  double cv_grid_ratio = 0.01;
  int threads = 1;
};

// One bootstrap's inference pass: knockoff draw, Lasso fit, W, pi.
struct KnockoffRun {
  int bootstrap_id = 0;
  Vector w;
  Vector pi;
  double lambda = 0.0;
  bool converged = false;
};

struct StepUpResult {
  std::optional<int> k_hat;   // 1-based step-up index
  std::vector<int> selected;  // 0-based feature indices, ascending
};

struct AggregationResult {
  Vector pi_bar;
  std::optional<int> k_hat;
  std::vector<int> selected;
  std::vector<KnockoffRun> per_bootstrap;
};

// pi_bar_j = min(1, q_gamma({pvals_bj}) / gamma) with q_gamma the
// ceil(gamma * B)-th order statistic.
Vector quantile_aggregate(const Matrix& pvals, double gamma);

StepUpResult bh_select(const Vector& pvals, double alpha);
StepUpResult by_select(const Vector& pvals, double alpha);

// One full vanilla-KO bootstrap on (x, y): sample knockoffs with the given
// stream, center and pair-scale [X, X_tilde], pick lambda, fit, and convert.
KnockoffRun run_bootstrap(const Matrix& x, const Vector& y,
                          const GaussianModel& model, RngStream& rng,
                          int bootstrap_id, const AkoConfig& config);

AggregationResult run_ako(const Matrix& x, const Vector& y,
                          const GaussianModel& model, const AkoConfig& config);

struct VanillaResult {
  Vector w;
  double threshold = 0.0;
  std::vector<int> selected;
  double lambda = 0.0;
};

// Vanilla KO on the bootstrap stream (master_seed, 1), the same draw AKO
// would use for its first bootstrap.
VanillaResult run_vanilla(const Matrix& x, const Vector& y,
                          const GaussianModel& model, const AkoConfig& config);

}  // namespace ako

#endif  // AKO_AGGREGATION_HPP

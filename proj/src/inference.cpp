#include "ako/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ako {

double kappa_constant() {
  const double r = std::sqrt(22.0);
  return (r - 2.0) / (7.0 * r - 32.0);
}

KnockoffStats lcd_statistic(const Vector& beta_hat, int bootstrap_id) {
  const int len = static_cast<int>(beta_hat.size());
  if (len % 2 != 0)
    throw std::invalid_argument("lcd_statistic: coefficient vector length must be even");
  const int p = len / 2;
  Vector w(p);
  for (int j = 0; j < p; ++j)
    w[j] = std::abs(beta_hat[j]) - std::abs(beta_hat[j + p]);
  return KnockoffStats{std::move(w), bootstrap_id};
}

double knockoff_threshold(const KnockoffStats& stats, double alpha) {
  const Vector& w = stats.w;
  const int p = static_cast<int>(w.size());
  std::vector<double> candidates;
  candidates.reserve(p);
  for (int j = 0; j < p; ++j)
    if (w[j] != 0.0) candidates.push_back(std::abs(w[j]));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  for (double t : candidates) {
    int n_neg = 0, n_pos = 0;
    for (int j = 0; j < p; ++j) {
      if (w[j] <= -t) ++n_neg;
      if (w[j] >= t) ++n_pos;
    }
    const double ratio = (1.0 + n_neg) / std::max(n_pos, 1);
    if (ratio <= alpha) return t;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<int> vanilla_select(const KnockoffStats& stats, double alpha) {
  const double tau = knockoff_threshold(stats, alpha);
  std::vector<int> selected;
  if (std::isinf(tau)) return selected;
  for (int j = 0; j < stats.w.size(); ++j)
    if (stats.w[j] >= tau) selected.push_back(j);
  return selected;
}

IntermediatePValues intermediate_pvalues(const KnockoffStats& stats,
                                         double offset_c) {
  if (!(offset_c > 0.0))
    throw std::invalid_argument("intermediate_pvalues: offset must be > 0");
  const Vector& w = stats.w;
  const int p = static_cast<int>(w.size());
  std::vector<double> sorted(w.data(), w.data() + p);
  std::sort(sorted.begin(), sorted.end());
  Vector pi(p);
  for (int j = 0; j < p; ++j) {
    if (w[j] > 0.0) {
      // #{k : w_k <= -w_j} via binary search on the sorted copy.
      const auto it =
          std::upper_bound(sorted.begin(), sorted.end(), -w[j]);
      const double count = static_cast<double>(it - sorted.begin());
      pi[j] = std::min(1.0, (offset_c + count) / p);
    } else {
      pi[j] = 1.0;
    }
  }
  return IntermediatePValues{std::move(pi), offset_c};
}

}  // namespace ako

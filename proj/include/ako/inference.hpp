#ifndef AKO_INFERENCE_HPP
#define AKO_INFERENCE_HPP

#include <vector>

#include "ako/linalg.hpp"

namespace ako {

// Super-uniformity constant for intermediate p-values at offset c = 1:
// (sqrt(22) - 2) / (7 sqrt(22) - 32) <= 3.24.
double kappa_constant();

struct KnockoffStats {
  Vector w;
  int bootstrap_id = 0;
};

struct IntermediatePValues {
  Vector pi;
  double offset_c = 1.0;
};

// W_j = |beta_j| - |beta_{j+p}| from a length-2p coefficient vector.
KnockoffStats lcd_statistic(const Vector& beta_hat, int bootstrap_id = 0);

// Data-dependent threshold: the smallest t among {|w_j| : w_j != 0} with
// (1 + #{j : w_j <= -t}) / max(#{j : w_j >= t}, 1) <= alpha; +inf if none.
double knockoff_threshold(const KnockoffStats& stats, double alpha);

// { j : w_j >= tau_+ }, 0-based; empty when tau_+ = +inf.
std::vector<int> vanilla_select(const KnockoffStats& stats, double alpha);

// pi_j = (c + #{k : w_k <= -w_j}) / p when w_j > 0, else 1; capped at 1.
IntermediatePValues intermediate_pvalues(const KnockoffStats& stats,
                                         double offset_c = 1.0);

}  // namespace ako

#endif  // AKO_INFERENCE_HPP

#ifndef AKO_SIMULATION_HPP
#define AKO_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ako/aggregation.hpp"

namespace ako {

struct SimConfig {
  int n = 500;
  int p = 1000;
  double rho = 0.5;
  double sparsity = 0.06;
  double snr = 3.0;
  std::uint64_t master_seed = 0;
};

struct SimDataset {
  Matrix x;
  Vector y;
  Vector beta_star;
  std::vector<int> support;  // 0-based, ascending
  double sigma_noise = 0.0;
};

struct SimMetrics {
  double fdp = 0.0;
  double power = 0.0;
  int selected_count = 0;
};

// X ~ N(0, toeplitz(rho, p)) row-wise; support drawn without replacement;
// amplitude-1 coefficients; noise scaled so ||X beta|| / (snr ||eps||) = sigma.
SimDataset generate_dataset(const SimConfig& config);

// Global-null variant: beta* = 0, y = eps ~ N(0, I_n), sigma_noise = 1.
SimDataset generate_global_null(const SimConfig& config);

SimMetrics fdp_and_power(const std::vector<int>& selected,
                         const std::vector<int>& support, int p);

struct RunRecord {
  std::string experiment;
  std::string cell;  // e.g. "rho=0.5" or "B=25,gamma=0.3"; empty for stability
  std::string method;  // "ako" or "ko"
  int run_id = 0;
  double fdp = 0.0;
  double power = 0.0;
  int selected_count = 0;
};

struct CellSummary {
  std::string cell;
  std::string method;
  int runs = 0;
  double mean_fdp = 0.0, se_fdp = 0.0;
  double mean_power = 0.0, se_power = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

// One dataset, many re-runs of KO and AKO with fresh knockoff seeds.
std::vector<RunRecord> stability_experiment(const SimConfig& config,
                                            int ako_runs, int ko_runs,
                                            const AkoConfig& ako_config);

enum class SweepParam { Rho, Sparsity, Snr };

// Fresh datasets per (cell, run); each cell holds the other parameters at
// their base values and scores the requested methods.
std::vector<RunRecord> benchmark_grid(const SimConfig& base, SweepParam vary,
                                      const std::vector<double>& values,
                                      int runs_per_cell,
                                      const AkoConfig& ako_config,
                                      bool run_ako_method, bool run_ko_method);

// Paired (B, gamma) cross-product: run r shares its dataset and knockoff
// streams across every cell.
std::vector<RunRecord> b_gamma_sweep(const SimConfig& base,
                                     const std::vector<int>& b_list,
                                     const std::vector<double>& gamma_list,
                                     int runs, const AkoConfig& ako_config);

struct SpearmanRecord {
  int feature_a = 0;  // 0-based null feature indices
  int feature_b = 0;
  double rho = 0.0;
  double pvalue = 1.0;
};

// Rank correlation of null features' aggregated p-values across independent
// datasets sharing one support.
std::vector<SpearmanRecord> spearman_diagnostic(const SimConfig& config,
                                                int observations,
                                                const AkoConfig& ako_config,
                                                int max_pairs = 200);

// Spearman rank correlation with average ranks for ties, plus the two-sided
// t-approximation p-value. Exposed for tests.
std::pair<double, double> spearman_correlation(const std::vector<double>& a,
                                               const std::vector<double>& b);

}  // namespace ako

#endif  // AKO_SIMULATION_HPP

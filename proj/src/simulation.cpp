#include "ako/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace ako {

namespace {

// Fixed stream ids for dataset generation, kept far away from the bootstrap
// ids 1..B used inside run_ako.
constexpr std::uint64_t kDesignStream = (1ULL << 32) + 1;
constexpr std::uint64_t kNoiseStream = (1ULL << 32) + 2;
constexpr std::uint64_t kSupportStream = (1ULL << 32) + 3;

void validate(const SimConfig& c, bool need_support) {
  if (c.n < 1 || c.p < 1)
    throw std::invalid_argument("SimConfig: n and p must be >= 1");
  if (!(c.rho >= 0.0 && c.rho < 1.0))
    throw std::invalid_argument("SimConfig: rho must be in [0, 1)");
  if (need_support) {
    if (!(c.sparsity > 0.0 && c.sparsity < 1.0))
      throw std::invalid_argument("SimConfig: sparsity must be in (0, 1)");
    if (static_cast<int>(std::lround(c.sparsity * c.p)) < 1)
      throw std::invalid_argument("SimConfig: round(sparsity * p) must be >= 1");
    if (!(c.snr > 0.0))
      throw std::invalid_argument("SimConfig: snr must be > 0");
  }
}

Matrix sample_design(const SimConfig& c, std::uint64_t design_seed) {
  Covariance sigma = toeplitz_covariance(c.rho, c.p);
  CholeskyFactor chol = cholesky(sigma);
  RngStream rng = derive_stream(design_seed, kDesignStream);
  return sample_mvn(Vector::Zero(c.p), chol, c.n, rng);
}

// Design and noise come from obs_seed; the support always comes from the
// config seed, so repeated observations share one truth.
SimDataset generate_with_seeds(const SimConfig& c, std::uint64_t obs_seed) {
  validate(c, true);
  SimDataset ds;
  ds.x = sample_design(c, obs_seed);

  const int k = static_cast<int>(std::lround(c.sparsity * c.p));
  RngStream support_rng = derive_stream(c.master_seed, kSupportStream);
  ds.support = support_rng.sample_without_replacement(c.p, k);
  ds.beta_star = Vector::Zero(c.p);
  for (int j : ds.support) ds.beta_star[j] = 1.0;

  RngStream noise_rng = derive_stream(obs_seed, kNoiseStream);
  Vector eps(c.n);
  for (int i = 0; i < c.n; ++i) eps[i] = noise_rng.normal();

  Vector signal = ds.x * ds.beta_star;
  ds.sigma_noise = signal.norm() / (c.snr * eps.norm());
  ds.y = signal + ds.sigma_noise * eps;
  return ds;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

SimDataset generate_dataset(const SimConfig& config) {
  return generate_with_seeds(config, config.master_seed);
}

SimDataset generate_global_null(const SimConfig& config) {
  validate(config, false);
  SimDataset ds;
  ds.x = sample_design(config, config.master_seed);
  ds.beta_star = Vector::Zero(config.p);
  RngStream noise_rng = derive_stream(config.master_seed, kNoiseStream);
  ds.y.resize(config.n);
  for (int i = 0; i < config.n; ++i) ds.y[i] = noise_rng.normal();
  ds.sigma_noise = 1.0;
  return ds;
}

SimMetrics fdp_and_power(const std::vector<int>& selected,
                         const std::vector<int>& support, int p) {
  for (int j : selected)
    if (j < 0 || j >= p)
      throw std::invalid_argument("fdp_and_power: selected index out of range");
  for (int j : support)
    if (j < 0 || j >= p)
      throw std::invalid_argument("fdp_and_power: support index out of range");

  int true_pos = 0;
  for (int j : selected)
    if (std::find(support.begin(), support.end(), j) != support.end())
      ++true_pos;
  SimMetrics m;
  m.selected_count = static_cast<int>(selected.size());
  const int false_pos = m.selected_count - true_pos;
  m.fdp = static_cast<double>(false_pos) / std::max<int>(m.selected_count, 1);
  m.power = support.empty()
                ? 0.0
                : static_cast<double>(true_pos) / static_cast<double>(support.size());
  return m;
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{r.cell, r.method}].push_back(&r);
  std::vector<CellSummary> out;
  for (const auto& [key, rs] : groups) {
    CellSummary s;
    s.cell = key.first;
    s.method = key.second;
    s.runs = static_cast<int>(rs.size());
    for (const auto* r : rs) {
      s.mean_fdp += r->fdp;
      s.mean_power += r->power;
    }
    s.mean_fdp /= s.runs;
    s.mean_power /= s.runs;
    if (s.runs > 1) {
      double vf = 0.0, vp = 0.0;
      for (const auto* r : rs) {
        vf += (r->fdp - s.mean_fdp) * (r->fdp - s.mean_fdp);
        vp += (r->power - s.mean_power) * (r->power - s.mean_power);
      }
      s.se_fdp = std::sqrt(vf / (s.runs - 1) / s.runs);
      s.se_power = std::sqrt(vp / (s.runs - 1) / s.runs);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RunRecord> stability_experiment(const SimConfig& config,
                                            int ako_runs, int ko_runs,
                                            const AkoConfig& ako_config) {
  if (ako_runs < 0 || ko_runs < 0)
    throw std::invalid_argument("stability_experiment: negative run counts");
  SimDataset ds = generate_dataset(config);
  GaussianModel model =
      make_gaussian_model(Vector::Zero(config.p), toeplitz_covariance(config.rho, config.p));

  const int total = ako_runs + ko_runs;
  std::vector<RunRecord> records(total);
  AkoConfig inner = ako_config;
  inner.threads = 1;

  const int threads = std::max(1, ako_config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int r = 0; r < total; ++r) {
    const bool is_ako = r < ako_runs;
    AkoConfig cfg = inner;
    cfg.master_seed =
        mix_seed(config.master_seed, is_ako ? 0xA000000ULL + r
                                            : 0xB000000ULL + (r - ako_runs));
    std::vector<int> selected;
    if (is_ako) {
      selected = run_ako(ds.x, ds.y, model, cfg).selected;
    } else {
      selected = run_vanilla(ds.x, ds.y, model, cfg).selected;
    }
    SimMetrics m = fdp_and_power(selected, ds.support, config.p);
    records[r] = RunRecord{"stability", "", is_ako ? "ako" : "ko",
                           is_ako ? r : r - ako_runs, m.fdp, m.power,
                           m.selected_count};
  }
  return records;
}

std::vector<RunRecord> benchmark_grid(const SimConfig& base, SweepParam vary,
                                      const std::vector<double>& values,
                                      int runs_per_cell,
                                      const AkoConfig& ako_config,
                                      bool run_ako_method, bool run_ko_method) {
  if (values.empty()) throw std::invalid_argument("benchmark_grid: empty grid");
  if (runs_per_cell < 1)
    throw std::invalid_argument("benchmark_grid: runs_per_cell must be >= 1");

  struct Task {
    SimConfig config;
    std::string cell;
    int run = 0;
    std::uint64_t dataset_seed = 0;
  };
  std::vector<Task> tasks;
  for (size_t c = 0; c < values.size(); ++c) {
    SimConfig cfg = base;
    std::string name;
    switch (vary) {
      case SweepParam::Rho: cfg.rho = values[c]; name = "rho="; break;
      case SweepParam::Sparsity: cfg.sparsity = values[c]; name = "sparsity="; break;
      case SweepParam::Snr: cfg.snr = values[c]; name = "snr="; break;
    }
    name += format_value(values[c]);
    for (int r = 0; r < runs_per_cell; ++r) {
      SimConfig run_cfg = cfg;
      run_cfg.master_seed = mix_seed(base.master_seed, (c << 24) + r);
      tasks.push_back({run_cfg, name, r, run_cfg.master_seed});
    }
  }

  std::vector<RunRecord> ako_records(run_ako_method ? tasks.size() : 0);
  std::vector<RunRecord> ko_records(run_ko_method ? tasks.size() : 0);
  AkoConfig inner = ako_config;
  inner.threads = 1;

  const int threads = std::max(1, ako_config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (size_t t = 0; t < tasks.size(); ++t) {
    const Task& task = tasks[t];
    SimDataset ds = generate_dataset(task.config);
    GaussianModel model = make_gaussian_model(
        Vector::Zero(task.config.p),
        toeplitz_covariance(task.config.rho, task.config.p));
    if (run_ako_method) {
      AkoConfig cfg = inner;
      cfg.master_seed = mix_seed(task.dataset_seed, 0xA6);
      SimMetrics m = fdp_and_power(run_ako(ds.x, ds.y, model, cfg).selected,
                                   ds.support, task.config.p);
      ako_records[t] = RunRecord{"grid", task.cell, "ako", task.run,
                                 m.fdp, m.power, m.selected_count};
    }
    if (run_ko_method) {
      AkoConfig cfg = inner;
      cfg.master_seed = mix_seed(task.dataset_seed, 0xB6);
      SimMetrics m = fdp_and_power(run_vanilla(ds.x, ds.y, model, cfg).selected,
                                   ds.support, task.config.p);
      ko_records[t] = RunRecord{"grid", task.cell, "ko", task.run,
                                m.fdp, m.power, m.selected_count};
    }
  }

  std::vector<RunRecord> records;
  records.insert(records.end(), ako_records.begin(), ako_records.end());
  records.insert(records.end(), ko_records.begin(), ko_records.end());
  return records;
}

std::vector<RunRecord> b_gamma_sweep(const SimConfig& base,
                                     const std::vector<int>& b_list,
                                     const std::vector<double>& gamma_list,
                                     int runs, const AkoConfig& ako_config) {
  if (b_list.empty() || gamma_list.empty())
    throw std::invalid_argument("b_gamma_sweep: empty parameter lists");
  if (runs < 1) throw std::invalid_argument("b_gamma_sweep: runs must be >= 1");

  const size_t cells = b_list.size() * gamma_list.size();
  std::vector<RunRecord> records(cells * runs);
  AkoConfig inner = ako_config;
  inner.threads = 1;

  const int threads = std::max(1, ako_config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int r = 0; r < runs; ++r) {
    SimConfig run_cfg = base;
    run_cfg.master_seed = mix_seed(base.master_seed, r);
    SimDataset ds = generate_dataset(run_cfg);
    GaussianModel model = make_gaussian_model(
        Vector::Zero(base.p), toeplitz_covariance(base.rho, base.p));
    // Shared knockoff seed across cells: bootstrap b of a B=50 cell reuses
    // exactly the draws of bootstrap b in every smaller-B cell (paired design).
    const std::uint64_t ko_seed = mix_seed(run_cfg.master_seed, 0xB0);
    size_t cell = 0;
    for (int b : b_list) {
      for (double gamma : gamma_list) {
        AkoConfig cfg = inner;
        cfg.n_bootstraps = b;
        cfg.gamma = gamma;
        cfg.master_seed = ko_seed;
        SimMetrics m = fdp_and_power(run_ako(ds.x, ds.y, model, cfg).selected,
                                     ds.support, base.p);
        records[cell * runs + r] =
            RunRecord{"bgamma",
                      "B=" + std::to_string(b) + ",gamma=" + format_value(gamma),
                      "ako", r, m.fdp, m.power, m.selected_count};
        ++cell;
      }
    }
  }
  return records;
}

std::pair<double, double> spearman_correlation(const std::vector<double>& a,
                                               const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 3)
    throw std::invalid_argument("spearman_correlation: need matched sequences of length >= 3");
  const int n = static_cast<int>(a.size());

  auto ranks = [n](const std::vector<double>& v) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return v[i] < v[j]; });
    std::vector<double> rk(n);
    int i = 0;
    while (i < n) {
      int j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
      for (int k = i; k <= j; ++k) rk[idx[k]] = avg;
      i = j + 1;
    }
    return rk;
  };

  std::vector<double> ra = ranks(a), rb = ranks(b);
  double ma = 0.0, mb = 0.0;
  for (int i = 0; i < n; ++i) { ma += ra[i]; mb += rb[i]; }
  ma /= n; mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return {0.0, 1.0};  // constant sequence
  double rho = sab / std::sqrt(saa * sbb);
  rho = std::clamp(rho, -1.0, 1.0);

  double pval;
  if (std::abs(rho) >= 1.0) {
    pval = 0.0;
  } else {
    const double t = rho * std::sqrt((n - 2) / (1.0 - rho * rho));
    boost::math::students_t dist(n - 2);
    pval = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return {rho, pval};
}

std::vector<SpearmanRecord> spearman_diagnostic(const SimConfig& config,
                                                int observations,
                                                const AkoConfig& ako_config,
                                                int max_pairs) {
  if (observations < 10)
    throw std::invalid_argument("spearman_diagnostic: need at least 10 observations");

  // All observations share the support drawn from config.master_seed, so the
  // null feature set is fixed while design, noise and knockoffs vary.
  SimDataset first = generate_with_seeds(config, mix_seed(config.master_seed, 0));
  const std::vector<int>& support = first.support;
  std::vector<int> nulls;
  for (int j = 0; j < config.p; ++j)
    if (std::find(support.begin(), support.end(), j) == support.end())
      nulls.push_back(j);

  Matrix pi_bar_obs(observations, config.p);
  GaussianModel model = make_gaussian_model(
      Vector::Zero(config.p), toeplitz_covariance(config.rho, config.p));
  AkoConfig inner = ako_config;
  inner.threads = 1;

  const int threads = std::max(1, ako_config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int o = 0; o < observations; ++o) {
    const std::uint64_t obs_seed = mix_seed(config.master_seed, o);
    SimDataset ds = generate_with_seeds(config, obs_seed);
    AkoConfig cfg = inner;
    cfg.master_seed = mix_seed(obs_seed, 0xC0);
    pi_bar_obs.row(o) = run_ako(ds.x, ds.y, model, cfg).pi_bar;
  }

  RngStream pair_rng = derive_stream(config.master_seed, (1ULL << 33) + 7);
  std::vector<SpearmanRecord> out;
  const int n_pairs = std::min<int>(
      max_pairs, static_cast<int>(nulls.size() * (nulls.size() - 1) / 2));
  for (int t = 0; t < n_pairs; ++t) {
    const int a = nulls[pair_rng.uniform_below(nulls.size())];
    int b = a;
    while (b == a) b = nulls[pair_rng.uniform_below(nulls.size())];
    std::vector<double> va(observations), vb(observations);
    for (int o = 0; o < observations; ++o) {
      va[o] = pi_bar_obs(o, a);
      vb[o] = pi_bar_obs(o, b);
    }
    auto [rho, pval] = spearman_correlation(va, vb);
    out.push_back(SpearmanRecord{a, b, rho, pval});
  }
  return out;
}

}  // namespace ako

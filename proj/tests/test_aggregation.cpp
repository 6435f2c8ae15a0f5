#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ako/aggregation.hpp"
#include "ako/simulation.hpp"

using namespace ako;

namespace {

// Brute-force scan over all k for the step-up index.
StepUpResult brute_force_step_up(const Vector& pvals, double effective_alpha) {
  const int p = static_cast<int>(pvals.size());
  std::vector<double> sorted(pvals.data(), pvals.data() + p);
  std::sort(sorted.begin(), sorted.end());
  StepUpResult res;
  for (int k = 1; k <= p; ++k)
    if (sorted[k - 1] <= k * effective_alpha / p) res.k_hat = k;
  if (!res.k_hat) return res;
  for (int j = 0; j < p; ++j)
    if (pvals[j] <= sorted[*res.k_hat - 1]) res.selected.push_back(j);
  return res;
}

Vector make_pvals(std::initializer_list<double> values) {
  Vector v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("quantile_aggregate examples") {
  SUBCASE("B = 1, gamma = 1 is the identity") {
    Matrix pvals(1, 3);
    pvals << 0.2, 0.9, 1.0;
    Vector agg = quantile_aggregate(pvals, 1.0);
    CHECK((agg.transpose() - pvals.row(0)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("worked column at gamma = 0.5") {
    Matrix pvals(4, 1);
    pvals << 0.04, 0.1, 0.2, 0.8;
    Vector agg = quantile_aggregate(pvals, 0.5);
    CHECK(agg[0] == doctest::Approx(0.2));  // 2nd order statistic / 0.5
  }
  SUBCASE("all ones stays capped at 1") {
    Matrix pvals = Matrix::Ones(5, 2);
    Vector agg = quantile_aggregate(pvals, 0.3);
    CHECK(agg[0] == 1.0);
    CHECK(agg[1] == 1.0);
  }
  SUBCASE("gamma outside (0, 1] is rejected") {
    Matrix pvals = Matrix::Ones(2, 2);
    CHECK_THROWS_AS(quantile_aggregate(pvals, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(quantile_aggregate(pvals, 1.5), std::invalid_argument);
  }
}

TEST_CASE("aggregation monotonicity and lower bound") {
  RngStream rng = derive_stream(31, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int b = 1 + static_cast<int>(rng.uniform_below(12));
    const int p = 1 + static_cast<int>(rng.uniform_below(10));
    Matrix pvals(b, p);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < p; ++j) pvals(i, j) = 1e-6 + (1.0 - 1e-6) * rng.uniform();
    const double gamma = 0.05 + 0.95 * rng.uniform();
    Vector base = quantile_aggregate(pvals, gamma);

    // Lower bound: pi_bar_j >= column minimum / gamma, capped at 1.
    for (int j = 0; j < p; ++j) {
      const double bound = std::min(1.0, pvals.col(j).minCoeff() / gamma);
      CHECK(base[j] >= bound - 1e-15);
    }

    // Raising a single entry never lowers any aggregate.
    const int bi = static_cast<int>(rng.uniform_below(b));
    const int bj = static_cast<int>(rng.uniform_below(p));
    Matrix bumped = pvals;
    bumped(bi, bj) = bumped(bi, bj) + (1.0 - bumped(bi, bj)) * rng.uniform();
    Vector after = quantile_aggregate(bumped, gamma);
    for (int j = 0; j < p; ++j) CHECK(after[j] >= base[j] - 1e-15);
  }
}

TEST_CASE("bh_select examples") {
  SUBCASE("worked example") {
    StepUpResult r = bh_select(make_pvals({0.01, 0.02, 0.5}), 0.1);
    REQUIRE(r.k_hat);
    CHECK(*r.k_hat == 2);
    CHECK(r.selected == std::vector<int>{0, 1});
  }
  SUBCASE("all ones selects nothing") {
    StepUpResult r = bh_select(Vector::Ones(4), 0.1);
    CHECK(!r.k_hat);
    CHECK(r.selected.empty());
  }
  SUBCASE("all zeros selects everything") {
    StepUpResult r = bh_select(Vector::Zero(4), 0.1);
    REQUIRE(r.k_hat);
    CHECK(*r.k_hat == 4);
    CHECK(r.selected.size() == 4);
  }
}

TEST_CASE("by_select examples") {
  SUBCASE("beta(3) = 6/11") {
    // Thresholds k * (6/11) * 0.1 / 3.
    StepUpResult r = by_select(make_pvals({0.01, 0.02, 0.5}), 0.1);
    REQUIRE(r.k_hat);
    CHECK(*r.k_hat == 2);
    CHECK(r.selected == std::vector<int>{0, 1});
  }
  SUBCASE("BY selection is a subset of BH selection") {
    RngStream rng = derive_stream(31, 1);
    for (int trial = 0; trial < 200; ++trial) {
      const int p = 1 + static_cast<int>(rng.uniform_below(30));
      Vector pvals(p);
      for (int j = 0; j < p; ++j) pvals[j] = rng.uniform();
      const double alpha = 0.05 + 0.5 * rng.uniform();
      auto bh = bh_select(pvals, alpha).selected;
      auto by = by_select(pvals, alpha).selected;
      CHECK(std::includes(bh.begin(), bh.end(), by.begin(), by.end()));
    }
  }
}

TEST_CASE("step-up procedures match the brute-force oracle") {
  RngStream rng = derive_stream(31, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 1 + static_cast<int>(rng.uniform_below(64));
    Vector pvals(p);
    const double mode = rng.uniform();
    for (int j = 0; j < p; ++j) {
      if (mode < 0.1) pvals[j] = 1.0;                       // all ones
      else if (mode < 0.2) pvals[j] = 0.07;                 // all ties
      else pvals[j] = rng.uniform();
    }
    const double alpha = 0.01 + 0.5 * rng.uniform();

    StepUpResult bh = bh_select(pvals, alpha);
    StepUpResult bh_oracle = brute_force_step_up(pvals, alpha);
    CHECK(bh.k_hat == bh_oracle.k_hat);
    CHECK(bh.selected == bh_oracle.selected);

    double harmonic = 0.0;
    for (int i = 1; i <= p; ++i) harmonic += 1.0 / i;
    StepUpResult by = by_select(pvals, alpha);
    StepUpResult by_oracle = brute_force_step_up(pvals, alpha / harmonic);
    CHECK(by.k_hat == by_oracle.k_hat);
    CHECK(by.selected == by_oracle.selected);
  }
}

TEST_CASE("run_ako on a small simulated problem") {
  SimConfig sim;
  sim.n = 80;
  sim.p = 40;
  sim.rho = 0.3;
  sim.sparsity = 0.1;
  sim.snr = 3.0;
  sim.master_seed = 5;
  SimDataset ds = generate_dataset(sim);
  GaussianModel model = make_gaussian_model(Vector::Zero(sim.p),
                                            toeplitz_covariance(sim.rho, sim.p));
  AkoConfig cfg;
  cfg.n_bootstraps = 5;
  cfg.alpha = 0.2;
  cfg.master_seed = 77;
  cfg.cv_grid_size = 25;

  SUBCASE("deterministic including per-bootstrap statistics") {
    AggregationResult a = run_ako(ds.x, ds.y, model, cfg);
    AggregationResult b = run_ako(ds.x, ds.y, model, cfg);
    CHECK(a.pi_bar == b.pi_bar);
    CHECK(a.selected == b.selected);
    REQUIRE(a.per_bootstrap.size() == b.per_bootstrap.size());
    for (size_t i = 0; i < a.per_bootstrap.size(); ++i) {
      CHECK(a.per_bootstrap[i].w == b.per_bootstrap[i].w);
      CHECK(a.per_bootstrap[i].lambda == b.per_bootstrap[i].lambda);
    }
  }

  SUBCASE("worker-count independence") {
    AkoConfig serial = cfg;
    serial.threads = 1;
    AkoConfig parallel = cfg;
    parallel.threads = 8;
    AggregationResult a = run_ako(ds.x, ds.y, model, serial);
    AggregationResult b = run_ako(ds.x, ds.y, model, parallel);
    CHECK(a.pi_bar == b.pi_bar);
    CHECK(a.selected == b.selected);
    for (size_t i = 0; i < a.per_bootstrap.size(); ++i)
      CHECK(a.per_bootstrap[i].w == b.per_bootstrap[i].w);
  }

  SUBCASE("B=1, gamma=1, BH equals vanilla KO on the same draw") {
    AkoConfig single = cfg;
    single.n_bootstraps = 1;
    single.gamma = 1.0;
    single.fdr_method = FdrMethod::BH;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      single.master_seed = seed;
      AggregationResult agg = run_ako(ds.x, ds.y, model, single);
      VanillaResult van = run_vanilla(ds.x, ds.y, model, single);
      CHECK(agg.selected == van.selected);
    }
  }

  SUBCASE("invalid configs are rejected") {
    AkoConfig bad = cfg;
    bad.n_bootstraps = 0;
    CHECK_THROWS_AS(run_ako(ds.x, ds.y, model, bad), std::invalid_argument);
    bad = cfg;
    bad.gamma = 0.0;
    CHECK_THROWS_AS(run_ako(ds.x, ds.y, model, bad), std::invalid_argument);
  }
}

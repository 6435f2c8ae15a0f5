// Compares serial and OpenMP execution of the bootstrap loop on one AKO run
// and checks that the results are identical.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "ako/simulation.hpp"

namespace {

double run_once(const ako::SimDataset& ds, const ako::GaussianModel& model,
                ako::AkoConfig cfg, int threads, ako::AggregationResult& out) {
  cfg.threads = threads;
  const auto start = std::chrono::steady_clock::now();
  out = ako::run_ako(ds.x, ds.y, model, cfg);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double>(elapsed).count();
}

}  // namespace

int main(int argc, char** argv) {
  ako::SimConfig sim;
  sim.n = 200;
  sim.p = 400;
  sim.master_seed = 7;
  if (argc > 1) sim.n = std::atoi(argv[1]);
  if (argc > 2) sim.p = std::atoi(argv[2]);

  ako::SimDataset ds = ako::generate_dataset(sim);
  ako::GaussianModel model = ako::make_gaussian_model(
      ako::Vector::Zero(sim.p), ako::toeplitz_covariance(sim.rho, sim.p));

  ako::AkoConfig cfg;
  cfg.alpha = 0.1;
  cfg.master_seed = 11;

  ako::AggregationResult serial, parallel;
  const double t_serial = run_once(ds, model, cfg, 1, serial);
  const int max_threads = omp_get_max_threads();
  const double t_parallel = run_once(ds, model, cfg, max_threads, parallel);

  const bool identical = serial.pi_bar == parallel.pi_bar &&
                         serial.selected == parallel.selected;
  std::printf("n=%d p=%d B=%d\n", sim.n, sim.p, cfg.n_bootstraps);
  std::printf("serial   (1 thread):  %8.3f s\n", t_serial);
  std::printf("parallel (%d threads): %8.3f s  speedup %.2fx\n", max_threads,
              t_parallel, t_serial / t_parallel);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}

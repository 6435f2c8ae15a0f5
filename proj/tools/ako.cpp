#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ako/aggregation.hpp"
#include "ako/csv.hpp"
#include "ako/simulation.hpp"

using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct InferArgs {
  std::string method = "ako";
  std::string x_path, y_path;
  double alpha = 0.1;
  int bootstraps = 25;
  double gamma = 0.3;
  double offset = 1.0;
  std::string fdr_method = "bh";
  bool kappa_correct = false;
  std::string lambda = "cv";
  std::string oracle_cov;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
};

ako::AkoConfig to_config(const InferArgs& a) {
  ako::AkoConfig cfg;
  cfg.n_bootstraps = a.bootstraps;
  cfg.gamma = a.gamma;
  cfg.alpha = a.alpha;
  cfg.offset_c = a.offset;
  cfg.master_seed = a.seed;
  cfg.kappa_correct = a.kappa_correct;
  cfg.threads = a.threads;
  if (a.fdr_method == "bh") {
    cfg.fdr_method = ako::FdrMethod::BH;
  } else if (a.fdr_method == "by") {
    cfg.fdr_method = ako::FdrMethod::BY;
  } else {
    throw CLI::ValidationError("--fdr-method must be bh or by");
  }
  if (a.lambda != "cv") {
    if (a.lambda.rfind("fixed:", 0) != 0)
      throw CLI::ValidationError("--lambda must be cv or fixed:<value>");
    cfg.fixed_lambda = std::stod(a.lambda.substr(6));
    if (*cfg.fixed_lambda < 0.0)
      throw CLI::ValidationError("--lambda fixed value must be >= 0");
  }
  if (a.bootstraps < 1) throw CLI::ValidationError("--bootstraps must be >= 1");
  if (!(a.gamma > 0.0 && a.gamma <= 1.0))
    throw CLI::ValidationError("--gamma must be in (0, 1]");
  if (!(a.alpha > 0.0 && a.alpha < 1.0))
    throw CLI::ValidationError("--fdr must be in (0, 1)");
  if (!(a.offset > 0.0)) throw CLI::ValidationError("--offset must be > 0");
  return cfg;
}

std::vector<int> one_based(const std::vector<int>& idx) {
  std::vector<int> out(idx);
  for (int& j : out) ++j;
  return out;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw ako::CsvIoError("cannot write file: " + out_path);
    out << report.dump(2) << "\n";
  }
}

int run_infer(const InferArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  ako::AkoConfig cfg = to_config(args);

  ako::Matrix x = ako::read_csv_matrix(args.x_path);
  ako::Vector y = ako::read_csv_vector(args.y_path);
  if (x.rows() != y.size())
    throw ako::CsvError("shape mismatch: X has " + std::to_string(x.rows()) +
                        " rows but y has " + std::to_string(y.size()));

  ako::GaussianModel model = [&] {
    if (args.oracle_cov.empty()) return ako::estimate_gaussian(x);
    if (args.oracle_cov.rfind("toeplitz:", 0) != 0)
      throw CLI::ValidationError("--oracle-cov must look like toeplitz:<rho>");
    const double rho = std::stod(args.oracle_cov.substr(9));
    return ako::make_gaussian_model(
        ako::Vector::Zero(x.cols()),
        ako::toeplitz_covariance(rho, static_cast<int>(x.cols())));
  }();

  json report;
  report["schema"] = 1;
  report["version"] = kVersion;
  report["method"] = args.method;
  report["alpha"] = args.alpha;
  report["config"] = {{"bootstraps", args.bootstraps},
                      {"gamma", args.gamma},
                      {"offset_c", args.offset},
                      {"fdr_method", args.fdr_method},
                      {"kappa_correct", args.kappa_correct},
                      {"lambda_policy", args.lambda},
                      {"oracle_cov", args.oracle_cov},
                      {"seed", args.seed},
                      {"threads", args.threads}};

  if (args.method == "ako") {
    ako::AggregationResult res = ako::run_ako(x, y, model, cfg);
    report["selected"] = one_based(res.selected);
    report["pi_bar"] = std::vector<double>(res.pi_bar.data(),
                                           res.pi_bar.data() + res.pi_bar.size());
    if (res.k_hat) report["k_hat"] = *res.k_hat;
  } else {
    ako::VanillaResult res = ako::run_vanilla(x, y, model, cfg);
    report["selected"] = one_based(res.selected);
    report["w"] = std::vector<double>(res.w.data(), res.w.data() + res.w.size());
    report["threshold"] = std::isinf(res.threshold) ? json(nullptr)
                                                    : json(res.threshold);
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  report["runtime_ms"] = static_cast<int>(
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
  emit(report, args.out);
  return 0;
}

struct SimulateArgs {
  int n = 500, p = 1000;
  double rho = 0.5, sparsity = 0.06, snr = 3.0;
  std::uint64_t seed = 0;
  std::string out = ".";
};

int run_simulate(const SimulateArgs& args) {
  ako::SimConfig cfg{args.n, args.p, args.rho, args.sparsity, args.snr, args.seed};
  ako::SimDataset ds = ako::generate_dataset(cfg);

  const std::string dir = args.out;
  ako::write_csv_matrix(dir + "/X.csv", ds.x);
  ako::write_csv_vector(dir + "/y.csv", ds.y);
  ako::write_csv_vector(dir + "/beta.csv", ds.beta_star);

  json meta;
  meta["schema"] = 1;
  meta["version"] = kVersion;
  meta["config"] = {{"n", args.n},       {"p", args.p},
                    {"rho", args.rho},   {"sparsity", args.sparsity},
                    {"snr", args.snr},   {"seed", args.seed}};
  meta["sigma_noise"] = ds.sigma_noise;
  meta["support"] = one_based(ds.support);
  std::ofstream out(dir + "/meta.json");
  if (!out) throw ako::CsvIoError("cannot write file: " + dir + "/meta.json");
  out << meta.dump(2) << "\n";
  return 0;
}

struct BenchmarkArgs {
  std::string experiment;
  int n = 200, p = 400;
  double rho = 0.5, sparsity = 0.06, snr = 3.0;
  std::uint64_t seed = 0;
  std::string out = ".";
  int threads = 1;
  double alpha = 0.1;
  int bootstraps = 25;
  double gamma = 0.3;
  std::string fdr_method = "bh";
  // stability
  int ako_runs = 20, ko_runs = 500;
  // grid
  std::string vary = "rho";
  std::vector<double> values;
  int runs = 30;
  // bgamma
  std::vector<int> b_list;
  std::vector<double> gamma_list;
  // spearman
  int observations = 100;
  int max_pairs = 200;
};

void write_records(const std::string& path,
                   const std::vector<ako::RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ako::CsvIoError("cannot write file: " + path);
  out << "experiment,cell,method,run,fdp,power,selected_count\n";
  char buf[64];
  for (const auto& r : records) {
    out << r.experiment << ",\"" << r.cell << "\"," << r.method << ','
        << r.run_id << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.fdp, r.power);
    out << buf << r.selected_count << '\n';
  }
}

json summary_json(const std::vector<ako::RunRecord>& records) {
  json cells = json::array();
  for (const auto& s : ako::summarize(records)) {
    cells.push_back({{"cell", s.cell},
                     {"method", s.method},
                     {"runs", s.runs},
                     {"mean_fdp", s.mean_fdp},
                     {"se_fdp", s.se_fdp},
                     {"mean_power", s.mean_power},
                     {"se_power", s.se_power}});
  }
  return cells;
}

int run_benchmark(const BenchmarkArgs& args) {
  if (args.runs < 1 || args.ako_runs < 1 || args.ko_runs < 1 ||
      args.observations < 1)
    throw CLI::ValidationError("run counts must be >= 1");

  ako::SimConfig sim{args.n, args.p, args.rho, args.sparsity, args.snr, args.seed};
  ako::AkoConfig cfg;
  cfg.n_bootstraps = args.bootstraps;
  cfg.gamma = args.gamma;
  cfg.alpha = args.alpha;
  cfg.fdr_method =
      args.fdr_method == "by" ? ako::FdrMethod::BY : ako::FdrMethod::BH;
  cfg.threads = args.threads;

  json summary;
  summary["schema"] = 1;
  summary["version"] = kVersion;
  summary["experiment"] = args.experiment;
  summary["seed"] = args.seed;

  std::vector<ako::RunRecord> records;
  if (args.experiment == "stability") {
    records = ako::stability_experiment(sim, args.ako_runs, args.ko_runs, cfg);
  } else if (args.experiment == "grid") {
    ako::SweepParam vary;
    if (args.vary == "rho") vary = ako::SweepParam::Rho;
    else if (args.vary == "sparsity") vary = ako::SweepParam::Sparsity;
    else if (args.vary == "snr") vary = ako::SweepParam::Snr;
    else throw CLI::ValidationError("--vary must be rho, sparsity or snr");
    std::vector<double> values = args.values;
    if (values.empty()) values = {0.2, 0.5, 0.7};
    records = ako::benchmark_grid(sim, vary, values, args.runs, cfg, true, true);
  } else if (args.experiment == "bgamma") {
    std::vector<int> b_list = args.b_list;
    std::vector<double> gamma_list = args.gamma_list;
    if (b_list.empty()) b_list = {1, 5, 25, 50};
    if (gamma_list.empty()) gamma_list = {0.3};
    records = ako::b_gamma_sweep(sim, b_list, gamma_list, args.runs, cfg);
  } else if (args.experiment == "spearman") {
    auto pairs =
        ako::spearman_diagnostic(sim, args.observations, cfg, args.max_pairs);
    std::ofstream out(args.out + "/spearman.csv");
    if (!out)
      throw ako::CsvIoError("cannot write file: " + args.out + "/spearman.csv");
    out << "feature_a,feature_b,spearman_rho,pvalue\n";
    char buf[80];
    std::vector<double> abs_rho;
    for (const auto& r : pairs) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", r.feature_a + 1,
                    r.feature_b + 1, r.rho, r.pvalue);
      out << buf;
      abs_rho.push_back(std::abs(r.rho));
    }
    std::sort(abs_rho.begin(), abs_rho.end());
    summary["pairs"] = pairs.size();
    summary["median_abs_rho"] =
        abs_rho.empty() ? 0.0 : abs_rho[abs_rho.size() / 2];
    std::ofstream sout(args.out + "/summary.json");
    if (!sout)
      throw ako::CsvIoError("cannot write file: " + args.out + "/summary.json");
    sout << summary.dump(2) << "\n";
    return 0;
  } else {
    throw CLI::ValidationError("unknown experiment: " + args.experiment);
  }

  write_records(args.out + "/records.csv", records);
  summary["cells"] = summary_json(records);
  std::ofstream sout(args.out + "/summary.json");
  if (!sout)
    throw ako::CsvIoError("cannot write file: " + args.out + "/summary.json");
  sout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knockoff-filter variable selection with FDR control"};
  app.require_subcommand(1);

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Run KO or AKO inference on CSV data");
  infer_cmd->add_option("--method", infer.method)->check(CLI::IsMember({"ako", "ko"}));
  infer_cmd->add_option("--x", infer.x_path, "Design matrix CSV")->required();
  infer_cmd->add_option("--y", infer.y_path, "Response CSV")->required();
  infer_cmd->add_option("--fdr", infer.alpha, "Target FDR level");
  infer_cmd->add_option("--bootstraps", infer.bootstraps);
  infer_cmd->add_option("--gamma", infer.gamma);
  infer_cmd->add_option("--offset", infer.offset);
  infer_cmd->add_option("--fdr-method", infer.fdr_method);
  infer_cmd->add_flag("--kappa-correct", infer.kappa_correct);
  infer_cmd->add_option("--lambda", infer.lambda, "cv or fixed:<value>");
  infer_cmd->add_option("--oracle-cov", infer.oracle_cov, "toeplitz:<rho>");
  infer_cmd->add_option("--seed", infer.seed);
  infer_cmd->add_option("--out", infer.out);
  infer_cmd->add_option("--threads", infer.threads);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset");
  sim_cmd->add_option("--n", sim.n);
  sim_cmd->add_option("--p", sim.p);
  sim_cmd->add_option("--rho", sim.rho);
  sim_cmd->add_option("--sparsity", sim.sparsity);
  sim_cmd->add_option("--snr", sim.snr);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--out", sim.out, "Output directory");

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run a simulation experiment");
  bench_cmd->add_option("--experiment", bench.experiment)->required();
  bench_cmd->add_option("--n", bench.n);
  bench_cmd->add_option("--p", bench.p);
  bench_cmd->add_option("--rho", bench.rho);
  bench_cmd->add_option("--sparsity", bench.sparsity);
  bench_cmd->add_option("--snr", bench.snr);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out", bench.out, "Output directory");
  bench_cmd->add_option("--threads", bench.threads);
  bench_cmd->add_option("--fdr", bench.alpha);
  bench_cmd->add_option("--bootstraps", bench.bootstraps);
  bench_cmd->add_option("--gamma", bench.gamma);
  bench_cmd->add_option("--fdr-method", bench.fdr_method);
  bench_cmd->add_option("--ako-runs", bench.ako_runs);
  bench_cmd->add_option("--ko-runs", bench.ko_runs);
  bench_cmd->add_option("--vary", bench.vary);
  bench_cmd->add_option("--values", bench.values)->delimiter(',');
  bench_cmd->add_option("--runs", bench.runs);
  bench_cmd->add_option("--b-list", bench.b_list)->delimiter(',');
  bench_cmd->add_option("--gamma-list", bench.gamma_list)->delimiter(',');
  bench_cmd->add_option("--observations", bench.observations);
  bench_cmd->add_option("--max-pairs", bench.max_pairs);

  auto* version_cmd = app.add_subcommand("version", "Print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (version_cmd->parsed()) {
      std::cout << kVersion << "\n";
      return 0;
    }
    if (infer_cmd->parsed()) return run_infer(infer);
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (bench_cmd->parsed()) return run_benchmark(bench);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ako::CsvIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ako::CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}

// Command-line front end: run experiments, print bounds, run property
// checks and compute batch optima.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "smd/bounds.hpp"
#include "smd/config.hpp"
#include "smd/diagnostics.hpp"
#include "smd/errors.hpp"
#include "smd/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 1;

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<std::string> algorithm;
  std::optional<std::string> schedule;
  std::optional<unsigned> threads;
};

int cmd_run(const RunOptions& o) {
  smd::ExperimentConfig config = smd::load_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.replicates) config.replicates = *o.replicates;
  if (o.algorithm) config.algorithm = smd::algorithm_from_name(*o.algorithm);
  if (o.schedule) config.schedule = smd::schedule_from_name(*o.schedule);
  if (o.threads) config.threads = *o.threads;
  if (!o.out.empty()) config.output = o.out;
  const auto rows = smd::run_experiment(config);
  if (config.output.empty() || config.output == "-")
    smd::write_csv(std::cout, rows);
  else
    smd::write_csv_file(config.output, rows);
  return 0;
}

struct BoundOptions {
  std::string kind = "thm1";
  long t = 1;
  long dim = 2;
  double lambda = 1.0;
  std::optional<double> lipschitz;
  std::string loss = "hinge";
  double bound_k = 1.0;
  double y_max = 1.0;
  double alpha = 0.0;
  double vbar = 0.0;
};

int cmd_bound(const BoundOptions& o) {
  double lip = 0.0;
  if (o.lipschitz) {
    lip = *o.lipschitz;
  } else {
    const smd::LossKind loss = smd::loss_from_name(o.loss);
    lip = loss == smd::LossKind::squared
              ? smd::regression_lipschitz_constant(o.lambda, o.bound_k, o.y_max)
              : smd::lipschitz_constant(loss, o.lambda, o.bound_k);
  }
  smd::BoundKind kind;
  if (o.kind == "thm1")
    kind = smd::BoundKind::anytime_thm1;
  else if (o.kind == "fixed")
    kind = smd::BoundKind::fixed_horizon;
  else if (o.kind == "thm2")
    kind = smd::BoundKind::general_thm2;
  else
    throw smd::UsageError("unknown bound kind '" + o.kind + "'");
  std::printf("%.17g\n", smd::theoretical_bound(kind, o.t, o.dim, o.lambda, lip, o.alpha, o.vbar));
  return 0;
}

int cmd_check(std::uint64_t seed) {
  bool ok = true;
  for (const auto& c : smd::run_property_checks(seed)) {
    std::printf("%s %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? 0 : kExitCheckFailed;
}

struct MinimizeOptions {
  std::string config;
  std::string data;
  std::string loss = "hinge";
  double lambda = 1.0;
  bool header = false;
  std::size_t quantiles = 4;
  bool symmetric = true;
  double tol = 1e-8;
};

int cmd_minimize(const MinimizeOptions& o) {
  smd::ExperimentConfig config;
  if (!o.config.empty()) {
    config = smd::load_config(o.config);
  } else {
    if (o.data.empty()) throw smd::UsageError("minimize: pass --config or --data");
    config.distribution.type = "csv";
    config.distribution.path = o.data;
    config.distribution.header = o.header;
    config.loss = smd::loss_from_name(o.loss);
    config.lambda = o.lambda;
    config.basis.quantiles_per_dim = o.quantiles;
    config.basis.symmetric = o.symmetric;
  }
  const smd::Problem problem = smd::build_problem(config);
  const smd::BatchOptimum opt =
      o.tol == 1e-8 ? problem.optimum
                    : smd::batch_minimizer(*problem.dist, config.loss, problem.basis,
                                           config.lambda, o.tol);
  std::printf("method %s\nvalue %.17g\ngap %.3g\niterations %ld\ntheta", opt.method.c_str(),
              opt.value, opt.gap, opt.iterations);
  for (Eigen::Index j = 0; j < opt.theta.size(); ++j) std::printf(" %.17g", opt.theta(j));
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic mirror descent with averaging on the simplex"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a replicate experiment from a JSON config");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", run.out, "Output CSV path ('-' for stdout)");
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--replicates", run.replicates, "Number of replicates");
  run_cmd->add_option("--algorithm", run.algorithm, "smd, eg or sgd")
      ->check(CLI::IsMember({"smd", "eg", "sgd"}));
  run_cmd->add_option("--schedule", run.schedule, "anytime or fixed")
      ->check(CLI::IsMember({"anytime", "fixed"}));
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "Print a theoretical excess-risk bound");
  bound_cmd->add_option("--kind", bound.kind, "thm1, fixed or thm2")
      ->check(CLI::IsMember({"thm1", "fixed", "thm2"}));
  bound_cmd->add_option("--t", bound.t, "Iterations")->required();
  bound_cmd->add_option("--dim", bound.dim, "M");
  bound_cmd->add_option("--lambda", bound.lambda, "Simplex mass");
  bound_cmd->add_option("--lipschitz", bound.lipschitz, "L (default: from --loss and --K)");
  bound_cmd->add_option("--loss", bound.loss, "Loss used to derive L");
  bound_cmd->add_option("--K", bound.bound_k, "Bound on |h_j|");
  bound_cmd->add_option("--y-max", bound.y_max, "Bound on |y| for the squared loss");
  bound_cmd->add_option("--alpha", bound.alpha, "Strong convexity modulus (thm2)");
  bound_cmd->add_option("--vbar", bound.vbar, "Proxy range bound (thm2)");

  std::uint64_t check_seed = 20240601;
  auto* check_cmd = app.add_subcommand("check", "Run the property and diagnostic checks");
  check_cmd->add_option("--seed", check_seed, "Seed");

  MinimizeOptions minimize;
  auto* min_cmd = app.add_subcommand("minimize", "Compute min A over the simplex");
  min_cmd->add_option("--config", minimize.config, "Take data, basis and loss from a config");
  min_cmd->add_option("--data", minimize.data, "CSV with label,features...");
  min_cmd->add_option("--loss", minimize.loss, "hinge, exponential, logit or squared");
  min_cmd->add_option("--lambda", minimize.lambda, "Simplex mass");
  min_cmd->add_flag("--header", minimize.header, "CSV has a header row");
  min_cmd->add_option("--quantiles", minimize.quantiles, "Stump thresholds per coordinate");
  min_cmd->add_flag("!--no-symmetric", minimize.symmetric, "Do not add negated stumps");
  min_cmd->add_option("--tol", minimize.tol, "First-order gap tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*bound_cmd) return cmd_bound(bound);
    if (*check_cmd) return cmd_check(check_seed);
    if (*min_cmd) return cmd_minimize(minimize);
  } catch (const smd::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const smd::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitValidation;
  } catch (const smd::FileError& e) {
    std::fprintf(stderr, "file error: %s\n", e.what());
    return kExitValidation;
  } catch (const smd::DataExhausted& e) {
    std::fprintf(stderr, "data exhausted: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}

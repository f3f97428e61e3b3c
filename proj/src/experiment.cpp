#include "smd/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "smd/bounds.hpp"
#include "smd/errors.hpp"

namespace smd {

void validate(const ExperimentConfig& c) {
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda))
    throw DomainError("config: lambda must be positive");
  if (c.replicates < 1) throw DomainError("config: replicates must be >= 1");
  if (c.t_grid.empty()) throw DomainError("config: t_grid is empty");
  for (std::size_t k = 0; k < c.t_grid.size(); ++k) {
    if (c.t_grid[k] < 1) throw DomainError("config: t_grid entries must be >= 1");
    if (k > 0 && c.t_grid[k] <= c.t_grid[k - 1])
      throw DomainError("config: t_grid must be strictly increasing");
  }
  if (c.schedule == ScheduleKind::custom)
    throw DomainError("config: schedule must be 'anytime' or 'fixed'");
  if (!(c.y_max > 0.0)) throw DomainError("config: y_max must be positive");
  const auto& d = c.distribution;
  if (d.type == "synthetic-classification" || d.type == "synthetic-regression") {
    if (d.atoms < 1) throw DomainError("config: distribution.atoms must be >= 1");
    if (d.input_dim < 1) throw DomainError("config: distribution.input_dim must be >= 1");
    if (!(d.noise >= 0.0 && d.noise <= 1.0))
      throw DomainError("config: distribution.noise must lie in [0, 1]");
  } else if (d.type == "csv") {
    if (d.path.empty()) throw DomainError("config: distribution.path is required for csv");
  } else {
    throw DomainError("config: unknown distribution type '" + d.type + "'");
  }
}

namespace {

std::shared_ptr<const FiniteDistribution> make_distribution(const ExperimentConfig& c) {
  const auto& d = c.distribution;
  const bool regression = c.loss == LossKind::squared;
  if (d.type == "synthetic-classification") {
    if (regression) throw DomainError("config: squared loss needs a regression distribution");
    return std::make_shared<const FiniteDistribution>(
        synthetic_classification(d.atoms, d.input_dim, d.seed, d.noise));
  }
  if (d.type == "synthetic-regression") {
    if (!regression) throw DomainError("config: margin losses need a classification distribution");
    return std::make_shared<const FiniteDistribution>(
        synthetic_regression(d.atoms, d.input_dim, d.seed, d.noise));
  }
  CsvOptions options{regression ? DataKind::regression : DataKind::classification, d.header};
  return std::make_shared<const FiniteDistribution>(load_dataset(d.path, options));
}

BaseClass make_basis(const ExperimentConfig& c, const FiniteDistribution& dist) {
  const auto input_dim = dist[0].x.size();
  if (!c.basis.thresholds.empty())
    return stump_basis(input_dim, c.basis.thresholds, c.basis.symmetric);
  if (c.basis.quantiles_per_dim < 1) throw DomainError("config: basis needs thresholds");
  return stump_basis(input_dim, quantile_thresholds(dist, c.basis.quantiles_per_dim),
                     c.basis.symmetric);
}

double problem_lipschitz(const ExperimentConfig& c, const FiniteDistribution& dist,
                         const BaseClass& basis) {
  if (c.loss != LossKind::squared) return lipschitz_constant(c.loss, c.lambda, basis.bound());
  if (dist.max_abs_response() > c.y_max)
    throw DomainError("config: |y| exceeds y_max on the support");
  return regression_lipschitz_constant(c.lambda, basis.bound(), c.y_max);
}

double vstar_of(const ProxyFunction& proxy) {
  const auto v = proxy.vmax();
  if (!v) throw UnsupportedError("proxy has no known maximum on the simplex");
  return *v;
}

}  // namespace

Problem build_problem(const ExperimentConfig& config) {
  validate(config);
  auto dist = make_distribution(config);
  BaseClass basis = make_basis(config, *dist);
  ExactRisk risk(*dist, config.loss, basis);
  BatchOptimum optimum = batch_minimizer(*dist, config.loss, basis, config.lambda);
  ProxyFunction proxy = ProxyFunction::from_name(config.proxy, config.lambda, basis.dim());
  const double lipschitz = problem_lipschitz(config, *dist, basis);
  auto oracle = make_oracle(config.loss, config.lambda, basis.bound(), config.y_max);
  return Problem{std::move(dist), std::move(basis),  std::move(risk),  std::move(optimum),
                 std::move(proxy), std::move(oracle), lipschitz};
}

Schedule experiment_schedule(const ExperimentConfig& config, const Problem& problem, long t) {
  const double lip = problem.lipschitz;
  const ProxyFunction& proxy = problem.proxy;
  const auto dim = static_cast<double>(proxy.dim());
  const bool fixed = config.schedule == ScheduleKind::fixed_horizon;
  switch (config.algorithm) {
    case Algorithm::smd_averaged:
      if (fixed) return make_schedule_fixed_horizon(lip, proxy.alpha(), vstar_of(proxy), t);
      if (proxy.kind() == ProxyKind::entropy) return make_schedule_anytime(lip, proxy.dim());
      return make_schedule_anytime(lip, proxy.alpha(), vstar_of(proxy));
    case Algorithm::eg: {
      const double c = std::sqrt(2.0 * std::log(dim)) / lip;
      if (fixed) return Schedule::fixed_horizon(c / std::sqrt(static_cast<double>(t)), 1.0);
      return Schedule::custom([c](long i) { return c / std::sqrt(static_cast<double>(i)); },
                              [](long) { return 1.0; });
    }
    case Algorithm::projected_sgd: {
      const double c = config.lambda * std::sqrt(2.0) / (lip * std::sqrt(dim));
      if (fixed) return Schedule::fixed_horizon(c / std::sqrt(static_cast<double>(t)), 1.0);
      return Schedule::custom([c](long i) { return c / std::sqrt(static_cast<double>(i)); },
                              [](long) { return 1.0; });
    }
  }
  throw DomainError("config: unknown algorithm");
}

double experiment_bound(const ExperimentConfig& config, const Problem& problem, long t) {
  const ProxyFunction& proxy = problem.proxy;
  const bool fixed = config.schedule == ScheduleKind::fixed_horizon;
  if (proxy.kind() == ProxyKind::entropy)
    return theoretical_bound(fixed ? BoundKind::fixed_horizon : BoundKind::anytime_thm1, t,
                             proxy.dim(), config.lambda, problem.lipschitz);
  if (fixed) return fixed_horizon_general_bound(t, problem.lipschitz, proxy.alpha(), vstar_of(proxy));
  return theoretical_bound(BoundKind::general_thm2, t, proxy.dim(), config.lambda,
                           problem.lipschitz, proxy.alpha(), vstar_of(proxy));
}

std::uint64_t replicate_seed(std::uint64_t base, int replicate) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(replicate) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct Outcome {
  double excess = 0.0;
  double phi = 0.0;
  double misclass = 0.0;
  double excess_last = 0.0;
  double phi_last = 0.0;
  double misclass_last = 0.0;
};

struct Summary {
  double mean_phi = 0.0, mean_excess = 0.0, stderr_excess = 0.0, mean_misclass = 0.0;
};

template <class Get>
Summary summarize(const std::vector<Outcome>& rows, std::size_t offset, int n, Get get) {
  Summary s;
  double sum_excess = 0.0, sum_phi = 0.0, sum_mis = 0.0;
  for (int r = 0; r < n; ++r) {
    const auto [excess, phi, mis] = get(rows[offset + static_cast<std::size_t>(r)]);
    sum_excess += excess;
    sum_phi += phi;
    sum_mis += mis;
  }
  s.mean_excess = sum_excess / n;
  s.mean_phi = sum_phi / n;
  s.mean_misclass = sum_mis / n;
  if (n > 1) {
    double ss = 0.0;
    for (int r = 0; r < n; ++r) {
      const double d = get(rows[offset + static_cast<std::size_t>(r)])[0] - s.mean_excess;
      ss += d * d;
    }
    s.stderr_excess = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  }
  return s;
}

}  // namespace

std::vector<RiskReport> run_experiment(const ExperimentConfig& config) {
  const Problem problem = build_problem(config);
  return run_experiment(config, problem);
}

std::vector<RiskReport> run_experiment(const ExperimentConfig& config, const Problem& problem) {
  validate(config);
  const int reps = config.replicates;
  const std::size_t n_t = config.t_grid.size();
  const std::size_t jobs = n_t * static_cast<std::size_t>(reps);
  const bool classification = problem.dist->kind() == DataKind::classification;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<EngineConfig> engines;
  engines.reserve(n_t);
  for (long t : config.t_grid)
    engines.push_back(make_engine_config(problem.proxy, experiment_schedule(config, problem, t),
                                         config.algorithm));

  std::vector<Outcome> outcomes(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t ti = job / static_cast<std::size_t>(reps);
      const int r = static_cast<int>(job % static_cast<std::size_t>(reps));
      const std::uint64_t seed = replicate_seed(config.seed, r);
      try {
        SampleStream stream(problem.dist, seed);
        const RunResult res = run(engines[ti], stream, *problem.oracle, problem.basis,
                                  config.t_grid[ti]);
        Outcome& o = outcomes[job];
        o.phi = problem.risk.value(res.theta_hat);
        o.excess = o.phi - problem.optimum.value;
        o.misclass = classification ? problem.risk.misclassification(res.theta_hat.values()) : nan;
        o.phi_last = problem.risk.value(res.state.theta);
        o.excess_last = o.phi_last - problem.optimum.value;
        o.misclass_last =
            classification ? problem.risk.misclassification(res.state.theta.values()) : nan;
      } catch (const NumericalError& e) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "replicate %d (seed %" PRIu64 "): ", r, seed);
        errors[job] = std::make_exception_ptr(NumericalError(buf + std::string(e.what())));
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<RiskReport> rows;
  auto emit = [&](const std::string& label, bool last) {
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      const long t = config.t_grid[ti];
      const Summary s = summarize(outcomes, ti * static_cast<std::size_t>(reps), reps,
                                  [last](const Outcome& o) {
                                    return last ? std::array<double, 3>{o.excess_last, o.phi_last,
                                                                        o.misclass_last}
                                                : std::array<double, 3>{o.excess, o.phi,
                                                                        o.misclass};
                                  });
      rows.push_back(RiskReport{label, t, s.mean_phi, s.mean_excess, s.stderr_excess,
                                s.mean_misclass, experiment_bound(config, problem, t),
                                problem.proxy.dim(), config.lambda, reps});
    }
  };
  if (config.algorithm == Algorithm::eg) {
    emit("eg", true);
    emit("eg-avg", false);
  } else {
    emit(std::string(to_string(config.algorithm)), false);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<RiskReport>& rows) {
  out << "algorithm,t,mean_excess,stderr,bound,misclass\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%ld,%.17g,%.17g,%.17g,%.17g\n", r.algorithm.c_str(), r.t,
                  r.mean_excess, r.stderr_excess, r.bound, r.misclassification);
    out << buf;
  }
}

std::string to_csv(const std::vector<RiskReport>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

void write_csv_file(const std::string& path, const std::vector<RiskReport>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  write_csv(out, rows);
  out.flush();
  if (!out) throw FileError("write to '" + path + "' failed");
}

}  // namespace smd

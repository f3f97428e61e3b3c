#ifndef SMD_EXPERIMENT_HPP
#define SMD_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smd/data.hpp"
#include "smd/engine.hpp"
#include "smd/loss.hpp"
#include "smd/proxy.hpp"
#include "smd/risk.hpp"
#include "smd/schedule.hpp"

namespace smd {

struct DistributionSpec {
  /// "synthetic-classification", "synthetic-regression" or "csv".
  std::string type = "synthetic-classification";
  std::size_t atoms = 32;
  Eigen::Index input_dim = 2;
  std::uint64_t seed = 1;
  double noise = 0.1;
  std::string path;
  bool header = false;
};

struct BasisSpec {
  /// Explicit stump thresholds per input coordinate. When empty,
  /// `quantiles_per_dim` thresholds are taken from the data.
  std::vector<std::vector<double>> thresholds;
  std::size_t quantiles_per_dim = 4;
  bool symmetric = true;
};

struct ExperimentConfig {
  DistributionSpec distribution;
  BasisSpec basis;
  LossKind loss = LossKind::hinge;
  double lambda = 1.0;
  std::string proxy = "entropy";
  /// anytime or fixed_horizon.
  ScheduleKind schedule = ScheduleKind::anytime;
  Algorithm algorithm = Algorithm::smd_averaged;
  std::vector<long> t_grid{10, 100, 1000};
  int replicates = 1;
  std::uint64_t seed = 0;
  std::string output;
  unsigned threads = 1;
  /// Bound on |y| used for the regression Lipschitz constant.
  double y_max = 1.0;
};

/// Throws DomainError naming the first invalid field.
void validate(const ExperimentConfig& config);

/// Everything a run needs that does not depend on the replicate.
struct Problem {
  std::shared_ptr<const FiniteDistribution> dist;
  BaseClass basis;
  ExactRisk risk;
  BatchOptimum optimum;
  ProxyFunction proxy;
  std::unique_ptr<LossOracle> oracle;
  double lipschitz;
};

Problem build_problem(const ExperimentConfig& config);

/// Step-size schedule used for `algorithm` at horizon t.
///   smd: tuned anytime (β_0 = L/√(αV*)) or fixed horizon (γ = 1/√t, β = L/√(2αV*)).
///   eg:  γ_i = √(2 ln M / i)/L, or √(2 ln M / t)/L with a known horizon.
///   sgd: γ_i = λ√2/(L√(M i)), or λ√2/(L√(M t)).
Schedule experiment_schedule(const ExperimentConfig& config, const Problem& problem, long t);

/// Reference bound for the configured method at t.
double experiment_bound(const ExperimentConfig& config, const Problem& problem, long t);

struct RiskReport {
  std::string algorithm;
  long t = 0;
  double phi_risk = 0.0;
  double mean_excess = 0.0;
  double stderr_excess = 0.0;
  /// NaN for regression.
  double misclassification = 0.0;
  double bound = 0.0;
  Eigen::Index dim = 0;
  double lambda = 0.0;
  int replicates = 0;
};

/// Seed of replicate r, derived from the base seed with splitmix64.
std::uint64_t replicate_seed(std::uint64_t base, int replicate);

/// One row per (output label, t). Exponentiated gradient yields two labels:
/// "eg" (last iterate) and "eg-avg" (averaged iterate).
std::vector<RiskReport> run_experiment(const ExperimentConfig& config);
std::vector<RiskReport> run_experiment(const ExperimentConfig& config, const Problem& problem);

/// Header "algorithm,t,mean_excess,stderr,bound,misclass", %.17g floats.
void write_csv(std::ostream& out, const std::vector<RiskReport>& rows);
std::string to_csv(const std::vector<RiskReport>& rows);
/// Writes to `path`; FileError on failure.
void write_csv_file(const std::string& path, const std::vector<RiskReport>& rows);

}  // namespace smd

#endif  // SMD_EXPERIMENT_HPP

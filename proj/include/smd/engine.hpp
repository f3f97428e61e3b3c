#ifndef SMD_ENGINE_HPP
#define SMD_ENGINE_HPP

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "smd/data.hpp"
#include "smd/loss.hpp"
#include "smd/proxy.hpp"
#include "smd/schedule.hpp"
#include "smd/simplex.hpp"

namespace smd {

enum class Algorithm { smd_averaged, eg, projected_sgd };

std::string_view to_string(Algorithm algorithm);
/// Accepts "smd", "eg", "sgd".
Algorithm algorithm_from_name(std::string_view name);

struct EngineConfig {
  ProxyFunction proxy;
  Schedule schedule;
  Weights theta0;
  Algorithm algorithm = Algorithm::smd_averaged;
  /// Tolerance passed to iterative mirror maps (power, p-norm).
  double mirror_tol = 1e-10;
};

/// θ_0 = θ* (uniform), the default starting point.
EngineConfig make_engine_config(ProxyFunction proxy, Schedule schedule,
                                Algorithm algorithm = Algorithm::smd_averaged);

struct EngineState {
  /// Σ_{k≤i} γ_k u_k divided by the schedule scale.
  DualVector zeta;
  Weights theta;
  /// γ-weighted mean of θ_0, …, θ_{i−1}.
  Weights theta_hat;
  long iter = 0;
  /// Σ_{k≤i} γ_k divided by the schedule scale.
  double gamma_sum = 0.0;
};

EngineState init(const EngineConfig& config);

/// One iteration of the configured algorithm.
EngineState step(const EngineState& state, const SubgradientSample& sample,
                 const EngineConfig& config);

/// Mirror descent with averaging:
///   ζ_i = ζ_{i−1} + γ_i u_i,  θ_i = −∇W_{β_i}(ζ_i),
///   θ̂_i = θ̂_{i−1} − (γ_i/Σγ)(θ̂_{i−1} − θ_{i−1}).
EngineState smd_step(const EngineState& state, const SubgradientSample& sample,
                     const EngineConfig& config);

/// Exponentiated gradient: θ_i ∝ θ_{i−1} ⊙ exp(−γ_i u_i). θ̂ is tracked
/// the same way as for smd_step.
EngineState eg_step(const EngineState& state, const SubgradientSample& sample,
                    const EngineConfig& config);

/// Projected SGD: θ_i = Π(θ_{i−1} − γ_i u_i), Euclidean projection onto the
/// simplex, with averaging.
EngineState sgd_step(const EngineState& state, const SubgradientSample& sample,
                     const EngineConfig& config);

struct TrajectoryPoint {
  Weights theta_prev;  // θ_{i−1}, where u_i was queried
  Eigen::VectorXd u;   // u_i(θ_{i−1})
};

struct RunResult {
  Weights theta_hat;
  EngineState state;
  std::vector<TrajectoryPoint> trajectory;  // empty unless logging was requested
};

/// Runs t iterations: draw (X_i, Y_i), query the oracle at θ_{i−1}, step.
RunResult run(const EngineConfig& config, SampleSource& source, const LossOracle& oracle,
              const BaseClass& basis, long t, bool log_trajectory = false);

}  // namespace smd

#endif  // SMD_ENGINE_HPP

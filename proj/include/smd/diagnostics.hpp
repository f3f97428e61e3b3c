#ifndef SMD_DIAGNOSTICS_HPP
#define SMD_DIAGNOSTICS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "smd/data.hpp"
#include "smd/engine.hpp"
#include "smd/loss.hpp"
#include "smd/proxy.hpp"
#include "smd/risk.hpp"
#include "smd/schedule.hpp"

namespace smd {

struct RegretReport {
  /// max over prefixes s ≤ t and vertices θ of LHS_s(θ) − RHS_s(θ).
  double max_violation;
  long worst_iteration;
  Eigen::Index worst_vertex;
  long iterations;
};

/// Checks, for every prefix s of the logged run and every vertex θ of the
/// simplex,
///   Σ_{i≤s} γ_i(θ_{i−1}−θ)ᵀ∇A(θ_{i−1})
///     ≤ β_s V(θ) − β_0 V(θ*) − Σ_{i≤s} γ_i(θ_{i−1}−θ)ᵀξ_i + Σ_{i≤s} γ_i²‖u_i‖∞²/(2αβ_{i−1}),
/// with ξ_i = u_i − ∇A(θ_{i−1}). The run must start from θ_0 = θ*.
/// Throws UsageError if the log is empty.
RegretReport regret_diagnostic(const std::vector<TrajectoryPoint>& log, const ExactRisk& risk,
                               const ProxyFunction& proxy, const Schedule& schedule);
RegretReport regret_diagnostic(const std::vector<TrajectoryPoint>& log,
                               const FiniteDistribution& dist, LossKind loss,
                               const BaseClass& basis, const ProxyFunction& proxy,
                               const Schedule& schedule);

struct ExpectationReport {
  double mean_excess;
  double stderr_excess;
  /// Schedule-specific bound (1/Σγ)(β_tV(θ*_A) − β_0V(θ*) + L²Σγ²/(2αβ_{i−1})).
  double bound;
  int replicates;
};

/// Replicate estimate of E A(θ̂_t) − min A next to the schedule-specific bound.
ExpectationReport expectation_diagnostic(std::shared_ptr<const FiniteDistribution> dist,
                                         LossKind loss, const BaseClass& basis,
                                         const ProxyFunction& proxy, const Schedule& schedule,
                                         double lipschitz, long t, int replicates,
                                         std::uint64_t seed);

/// max_j |Σ_a p_a u_j(θ; x_a, y_a) − ∂_j A(θ)|.
double exact_noise_residual(const FiniteDistribution& dist, LossKind loss, const BaseClass& basis,
                            const Weights& theta);

/// Largest |z-score| over components of the Monte Carlo mean of ξ(θ) over
/// `draws` samples (components with zero variance are skipped).
double sampled_noise_zscore(std::shared_ptr<const FiniteDistribution> dist, LossKind loss,
                            const BaseClass& basis, const Weights& theta, long draws,
                            std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Seeded property checks of the proxy, engine and harness invariants.
std::vector<CheckResult> run_property_checks(std::uint64_t seed);

}  // namespace smd

#endif  // SMD_DIAGNOSTICS_HPP

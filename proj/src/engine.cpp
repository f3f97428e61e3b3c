#include "smd/engine.hpp"

#include <limits>
#include <string>

#include "smd/errors.hpp"
#include "smd/projection.hpp"

namespace smd {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::smd_averaged: return "smd";
    case Algorithm::eg: return "eg";
    case Algorithm::projected_sgd: return "sgd";
  }
  return "unknown";
}

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "smd" || name == "smd-averaged") return Algorithm::smd_averaged;
  if (name == "eg") return Algorithm::eg;
  if (name == "sgd" || name == "projected-sgd") return Algorithm::projected_sgd;
  throw DomainError("unknown algorithm '" + std::string(name) + "'");
}

EngineConfig make_engine_config(ProxyFunction proxy, Schedule schedule, Algorithm algorithm) {
  Weights theta0 = proxy.minimizer();
  return EngineConfig{std::move(proxy), std::move(schedule), std::move(theta0), algorithm};
}

EngineState init(const EngineConfig& config) {
  const Weights& t0 = config.theta0;
  if (t0.size() != config.proxy.dim())
    throw DomainError("init: theta0 dimension differs from the proxy dimension");
  if (std::abs(t0.mass() - config.proxy.lambda()) > kMassTolerance)
    throw DomainError("init: theta0 mass differs from lambda");
  if (config.algorithm == Algorithm::eg && t0.values().minCoeff() <= 0.0)
    throw DomainError("init: exponentiated gradient needs a strictly positive theta0");
  return EngineState{DualVector::zero(t0.size()), t0, t0, 0, 0.0};
}

namespace {

void check_sample(const EngineState& state, const SubgradientSample& sample) {
  if (sample.u.size() != state.theta.size())
    throw DomainError("step: sub-gradient length " + std::to_string(sample.u.size()) +
                      " differs from M = " + std::to_string(state.theta.size()));
  if (!sample.u.allFinite()) throw DomainError("step: non-finite sub-gradient");
}

// θ̂_i = θ̂_{i−1} − (g_i / Σ_{k≤i} g_k)(θ̂_{i−1} − θ_{i−1}); with γ ≡ 1 the
// weight is exactly 1/i.
Weights averaged(const EngineState& state, double unit_gamma, double gamma_sum) {
  const double w = unit_gamma / gamma_sum;
  const Eigen::VectorXd& avg = state.theta_hat.values();
  return Weights(avg - w * (avg - state.theta.values()), state.theta.mass());
}

}  // namespace

EngineState smd_step(const EngineState& state, const SubgradientSample& sample,
                     const EngineConfig& config) {
  check_sample(state, sample);
  const Schedule& sched = config.schedule;
  const long i = state.iter + 1;
  const double g = sched.unit_gamma(i);
  const double b = sched.unit_beta(i);
  if (b < sched.unit_beta(i - 1))
    throw DomainError("step: temperature sequence decreased at i = " + std::to_string(i));

  EngineState next{DualVector(state.zeta.values() + g * sample.u), state.theta, state.theta_hat,
                   i, state.gamma_sum + g};
  next.theta_hat = averaged(state, g, next.gamma_sum);
  // argmin {ζᵀθ + βV(θ)} is unchanged when ζ and β share a factor, so the
  // unscaled pair gives θ_i directly.
  next.theta = config.proxy.mirror_map(next.zeta, b, config.mirror_tol).theta;
  return next;
}

EngineState eg_step(const EngineState& state, const SubgradientSample& sample,
                    const EngineConfig& config) {
  check_sample(state, sample);
  if (state.iter == 0 && state.theta.values().minCoeff() <= 0.0)
    throw DomainError("eg_step: theta0 must be strictly positive");
  const Schedule& sched = config.schedule;
  const long i = state.iter + 1;
  const double g = sched.unit_gamma(i);
  const double gamma = sched.gamma(i);

  EngineState next{DualVector(state.zeta.values() + g * sample.u), state.theta, state.theta_hat,
                   i, state.gamma_sum + g};
  next.theta_hat = averaged(state, g, next.gamma_sum);
  const Eigen::ArrayXd prev = state.theta.values().array();
  const Eigen::VectorXd logits =
      (prev > 0.0)
          .select(prev.log() - gamma * sample.u.array(), -std::numeric_limits<double>::infinity())
          .matrix();
  next.theta = Weights(softmax(logits, state.theta.mass()), state.theta.mass(), Renormalize::yes);
  return next;
}

EngineState sgd_step(const EngineState& state, const SubgradientSample& sample,
                     const EngineConfig& config) {
  check_sample(state, sample);
  const Schedule& sched = config.schedule;
  const long i = state.iter + 1;
  const double g = sched.unit_gamma(i);
  const double gamma = sched.gamma(i);

  EngineState next{DualVector(state.zeta.values() + g * sample.u), state.theta, state.theta_hat,
                   i, state.gamma_sum + g};
  next.theta_hat = averaged(state, g, next.gamma_sum);
  const double mass = state.theta.mass();
  next.theta = Weights(project_to_simplex(state.theta.values() - gamma * sample.u, mass), mass,
                       Renormalize::yes);
  return next;
}

EngineState step(const EngineState& state, const SubgradientSample& sample,
                 const EngineConfig& config) {
  switch (config.algorithm) {
    case Algorithm::smd_averaged: return smd_step(state, sample, config);
    case Algorithm::eg: return eg_step(state, sample, config);
    case Algorithm::projected_sgd: return sgd_step(state, sample, config);
  }
  throw DomainError("step: unknown algorithm");
}

RunResult run(const EngineConfig& config, SampleSource& source, const LossOracle& oracle,
              const BaseClass& basis, long t, bool log_trajectory) {
  if (t < 1) throw DomainError("run: t must be >= 1");
  if (basis.dim() != config.proxy.dim()) throw DomainError("run: basis dimension differs from M");
  EngineState state = init(config);
  std::vector<TrajectoryPoint> log;
  if (log_trajectory) log.reserve(static_cast<std::size_t>(t));
  for (long i = 1; i <= t; ++i) {
    const Atom* atom = nullptr;
    try {
      atom = &source.next();
    } catch (const DataExhausted& e) {
      throw DataExhausted(std::string(e.what()) + " at iteration " + std::to_string(i), i);
    }
    const Eigen::VectorXd h = basis.evaluate(atom->x);
    SubgradientSample sample{oracle.subgradient(state.theta, h, atom->y), i};
    if (log_trajectory) log.push_back({state.theta, sample.u});
    state = step(state, sample, config);
  }
  Weights out = state.theta_hat;
  return RunResult{std::move(out), std::move(state), std::move(log)};
}

}  // namespace smd

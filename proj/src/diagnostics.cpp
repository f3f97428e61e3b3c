#include "smd/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "smd/bounds.hpp"
#include "smd/errors.hpp"

namespace smd {

RegretReport regret_diagnostic(const std::vector<TrajectoryPoint>& log, const ExactRisk& risk,
                               const ProxyFunction& proxy, const Schedule& schedule) {
  if (log.empty()) throw UsageError("regret_diagnostic: run was not logged");
  const Eigen::Index m = proxy.dim();
  const double lambda = proxy.lambda();
  if (risk.dim() != m) throw DomainError("regret_diagnostic: basis dimension differs from M");

  Eigen::VectorXd v_vertex(m);
  for (Eigen::Index j = 0; j < m; ++j) v_vertex(j) = proxy.value(Weights::vertex(m, j, lambda));
  const double v_star = proxy.value(proxy.minimizer());
  const double beta0 = schedule.beta0();

  Eigen::VectorXd lhs = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(m);
  double quad = 0.0;
  RegretReport report{-std::numeric_limits<double>::infinity(), 0, 0,
                      static_cast<long>(log.size())};
  for (std::size_t k = 0; k < log.size(); ++k) {
    const long i = static_cast<long>(k) + 1;
    const Eigen::VectorXd& theta = log[k].theta_prev.values();
    const Eigen::VectorXd& u = log[k].u;
    const Eigen::VectorXd grad = risk.gradient(theta);
    const Eigen::VectorXd xi = u - grad;
    const double gamma = schedule.gamma(i);
    // (θ_{i−1} − λe_j)ᵀg = θ_{i−1}ᵀg − λ g_j
    lhs += gamma * (Eigen::VectorXd::Constant(m, theta.dot(grad)) - lambda * grad);
    noise += gamma * (Eigen::VectorXd::Constant(m, theta.dot(xi)) - lambda * xi);
    const double un = u.lpNorm<Eigen::Infinity>();
    quad += gamma * gamma * un * un / (2.0 * proxy.alpha() * schedule.beta(i - 1));
    const double beta_i = schedule.beta(i);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double rhs = beta_i * v_vertex(j) - beta0 * v_star - noise(j) + quad;
      const double violation = lhs(j) - rhs;
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_iteration = i;
        report.worst_vertex = j;
      }
    }
  }
  return report;
}

RegretReport regret_diagnostic(const std::vector<TrajectoryPoint>& log,
                               const FiniteDistribution& dist, LossKind loss,
                               const BaseClass& basis, const ProxyFunction& proxy,
                               const Schedule& schedule) {
  return regret_diagnostic(log, ExactRisk(dist, loss, basis), proxy, schedule);
}

ExpectationReport expectation_diagnostic(std::shared_ptr<const FiniteDistribution> dist,
                                         LossKind loss, const BaseClass& basis,
                                         const ProxyFunction& proxy, const Schedule& schedule,
                                         double lipschitz, long t, int replicates,
                                         std::uint64_t seed) {
  if (replicates < 1) throw DomainError("expectation_diagnostic: replicates must be >= 1");
  const ExactRisk risk(*dist, loss, basis);
  const BatchOptimum opt = batch_minimizer(*dist, loss, basis, proxy.lambda());
  const auto oracle = make_oracle(loss, proxy.lambda(), basis.bound());
  const EngineConfig config = make_engine_config(proxy, schedule);
  std::vector<double> excess(static_cast<std::size_t>(replicates));
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> seeds(excess.size());
  seq.generate(seeds.begin(), seeds.end());
  for (std::size_t r = 0; r < excess.size(); ++r) {
    SampleStream stream(dist, seeds[r]);
    const RunResult res = run(config, stream, *oracle, basis, t);
    excess[r] = risk.value(res.theta_hat) - opt.value;
  }
  double mean = 0.0;
  for (double e : excess) mean += e;
  mean /= replicates;
  double ss = 0.0;
  for (double e : excess) ss += (e - mean) * (e - mean);
  const double se = replicates > 1 ? std::sqrt(ss / (replicates - 1) / replicates) : 0.0;
  const double bound = averaged_bound(proxy, schedule, lipschitz, t, proxy.value(opt.theta));
  return {mean, se, bound, replicates};
}

double exact_noise_residual(const FiniteDistribution& dist, LossKind loss, const BaseClass& basis,
                            const Weights& theta) {
  const ExactRisk risk(dist, loss, basis);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(basis.dim());
  for (const Atom& a : dist.atoms()) {
    const Eigen::VectorXd h = basis.evaluate(a.x);
    const Eigen::VectorXd u = loss == LossKind::squared
                                  ? regression_subgradient(h, a.y, theta).u
                                  : classification_subgradient(loss, h, a.y, theta).u;
    mean += a.p * u;
  }
  return (mean - risk.gradient(theta)).lpNorm<Eigen::Infinity>();
}

double sampled_noise_zscore(std::shared_ptr<const FiniteDistribution> dist, LossKind loss,
                            const BaseClass& basis, const Weights& theta, long draws,
                            std::uint64_t seed) {
  if (draws < 2) throw DomainError("sampled_noise_zscore: need at least two draws");
  const ExactRisk risk(*dist, loss, basis);
  const Eigen::VectorXd grad = risk.gradient(theta);
  const auto oracle = make_oracle(loss, theta.mass(), basis.bound());
  SampleStream stream(dist, seed);
  const Eigen::Index m = basis.dim();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m), sum_sq = Eigen::VectorXd::Zero(m);
  for (long k = 0; k < draws; ++k) {
    const Atom& a = stream.next();
    const Eigen::VectorXd xi = oracle->subgradient(theta, basis.evaluate(a.x), a.y) - grad;
    sum += xi;
    sum_sq += xi.cwiseAbs2();
  }
  const double n = static_cast<double>(draws);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mean = sum(j) / n;
    const double var = (sum_sq(j) - n * mean * mean) / (n - 1.0);
    if (var <= 1e-300) continue;
    worst = std::max(worst, std::abs(mean) / std::sqrt(var / n));
  }
  return worst;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Eigen::VectorXd random_simplex_point(std::mt19937_64& rng, Eigen::Index m, double lambda) {
  Eigen::VectorXd x(m);
  for (Eigen::Index j = 0; j < m; ++j) x(j) = -std::log(1.0 - unit_uniform(rng));
  return lambda * x / x.sum();
}

Eigen::VectorXd random_dual(std::mt19937_64& rng, Eigen::Index m, double scale) {
  Eigen::VectorXd z(m);
  for (Eigen::Index j = 0; j < m; ++j) z(j) = scale * (2.0 * unit_uniform(rng) - 1.0);
  return z;
}

}  // namespace

std::vector<CheckResult> run_property_checks(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;

  {  // −∇W_β versus central differences of W_β.
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 15);
      const double beta = 0.2 + 2.0 * unit_uniform(rng);
      const double lambda = 0.5 + unit_uniform(rng);
      const DualVector z(random_dual(rng, m, 2.0));
      const Eigen::VectorXd theta = entropy_mirror_map(z, beta, lambda).theta.values();
      for (Eigen::Index j = 0; j < m; ++j) {
        const double h = 1e-5;
        Eigen::VectorXd zp = z.values(), zm = z.values();
        zp(j) += h;
        zm(j) -= h;
        const double fd = (entropy_conjugate_value(DualVector(zp), beta, lambda) -
                           entropy_conjugate_value(DualVector(zm), beta, lambda)) /
                          (2.0 * h);
        worst = std::max(worst, std::abs(-fd - theta(j)) / std::max(theta(j), 1e-3));
      }
    }
    out.push_back({"mirror-map-gradient", worst <= 1e-6, fmt("max rel err %.3g", worst)});
  }

  {  // ‖∇W(z) − ∇W(z̃)‖₁ ≤ (λ/β)‖z − z̃‖∞ and zero Hessian row sums.
    long violations = 0;
    double row_sum = 0.0;
    for (int k = 0; k < 300; ++k) {
      const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 15);
      const double beta = 0.1 + 3.0 * unit_uniform(rng);
      const double lambda = 0.5 + 2.0 * unit_uniform(rng);
      const DualVector z(random_dual(rng, m, 3.0)), w(random_dual(rng, m, 3.0));
      const double lhs = (entropy_mirror_map(z, beta, lambda).theta.values() -
                          entropy_mirror_map(w, beta, lambda).theta.values())
                             .lpNorm<1>();
      const double rhs =
          lambda / beta * (z.values() - w.values()).lpNorm<Eigen::Infinity>();
      if (lhs > rhs + 1e-12) ++violations;
      row_sum = std::max(row_sum,
                         entropy_hessian(z, beta, lambda).rowwise().sum().lpNorm<Eigen::Infinity>());
    }
    out.push_back({"mirror-map-lipschitz", violations == 0,
                   fmt("%.0f violations", static_cast<double>(violations))});
    out.push_back({"hessian-row-sums", row_sum <= 1e-12, fmt("max |row sum| %.3g", row_sum)});
  }

  {  // (α/2)-strong convexity in ℓ1 of the entropy and power proxies.
    long violations = 0;
    for (int k = 0; k < 300; ++k) {
      const Eigen::Index m = 3 + static_cast<Eigen::Index>(rng() % 14);
      const double lambda = 0.5 + 2.0 * unit_uniform(rng);
      const ProxyFunction proxy =
          k % 2 == 0 ? ProxyFunction::entropy(lambda, m) : ProxyFunction::power(lambda, m);
      const Eigen::VectorXd x = random_simplex_point(rng, m, lambda);
      const Eigen::VectorXd y = random_simplex_point(rng, m, lambda);
      const double s = unit_uniform(rng);
      const double d = (x - y).lpNorm<1>();
      const double lhs = proxy.value(Weights(s * x + (1.0 - s) * y, lambda, Renormalize::yes));
      const double rhs = s * proxy.value(Weights(x, lambda, Renormalize::yes)) +
                         (1.0 - s) * proxy.value(Weights(y, lambda, Renormalize::yes)) -
                         0.5 * proxy.alpha() * s * (1.0 - s) * d * d;
      if (lhs > rhs + 1e-9) ++violations;
    }
    out.push_back({"strong-convexity", violations == 0,
                   fmt("%.0f violations", static_cast<double>(violations))});
  }

  // Shared synthetic problem for the engine-level checks.
  auto dist = std::make_shared<const FiniteDistribution>(synthetic_classification(24, 2, seed, 0.1));
  const BaseClass basis = stump_basis(2, {{-0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}}, true);
  const double lambda = 1.0;
  const ProxyFunction proxy = ProxyFunction::entropy(lambda, basis.dim());
  const double lip = lipschitz_constant(LossKind::hinge, lambda, basis.bound());
  const auto oracle = make_oracle(LossKind::hinge, lambda, basis.bound());
  const ExactRisk risk(*dist, LossKind::hinge, basis);

  {
    double worst = -std::numeric_limits<double>::infinity();
    const Schedule sched = make_schedule_anytime(lip, basis.dim());
    const EngineConfig config = make_engine_config(proxy, sched);
    for (int r = 0; r < 5; ++r) {
      SampleStream stream(dist, rng());
      const RunResult res = run(config, stream, *oracle, basis, 100, true);
      worst = std::max(worst, regret_diagnostic(res.trajectory, risk, proxy, sched).max_violation);
    }
    out.push_back({"regret-pathwise", worst <= 1e-8, fmt("max violation %.3g", worst)});
  }

  {
    const Weights theta(random_simplex_point(rng, basis.dim(), lambda), lambda, Renormalize::yes);
    const double residual = exact_noise_residual(*dist, LossKind::hinge, basis, theta);
    out.push_back({"noise-zero-mean", residual <= 1e-12, fmt("max residual %.3g", residual)});
  }

  {
    const Schedule sched = make_schedule_anytime(lip, basis.dim());
    const std::uint64_t s = rng();
    SampleStream a(dist, s), b(dist, s);
    const RunResult ra = run(make_engine_config(proxy, sched), a, *oracle, basis, 100);
    const RunResult rb = run(make_engine_config(proxy, sched.scaled(7.3)), b, *oracle, basis, 100);
    const bool same = ra.theta_hat.values() == rb.theta_hat.values();
    out.push_back({"scale-invariance", same, same ? "bit-identical" : "trajectories differ"});
  }

  {
    const Schedule sched = make_schedule_anytime(lip, basis.dim());
    const ExpectationReport rep =
        expectation_diagnostic(dist, LossKind::hinge, basis, proxy, sched, lip, 200, 40, rng());
    out.push_back({"expected-excess", rep.mean_excess + 2.0 * rep.stderr_excess <= rep.bound,
                   fmt("mean+2se %.4g, bound %.4g", rep.mean_excess + 2.0 * rep.stderr_excess,
                       rep.bound)});
  }
  return out;
}

}  // namespace smd

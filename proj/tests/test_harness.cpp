#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "smd/bounds.hpp"
#include "smd/config.hpp"
#include "smd/diagnostics.hpp"
#include "smd/errors.hpp"
#include "smd/experiment.hpp"
#include "smd/risk.hpp"

using namespace smd;

namespace {

Eigen::VectorXd vec1(double a) { return Eigen::VectorXd::Constant(1, a); }

FiniteDistribution separable() {
  return FiniteDistribution(DataKind::classification, {{vec1(0.5), 1.0, 1.0}});
}

const BaseClass& pair_basis() {
  static const BaseClass b = stump_basis(1, {{0.0}}, true);
  return b;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.distribution.atoms = 20;
  c.distribution.seed = 4;
  c.basis.thresholds = {{-0.5, 0.5}, {0.0}};
  c.t_grid = {5, 50};
  c.replicates = 6;
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("exact_phi_risk") {
  const FiniteDistribution d = separable();
  CHECK(exact_phi_risk(Weights(Eigen::Vector2d(1, 0), 1.0), d, LossKind::hinge, pair_basis()) == 0.0);
  CHECK(exact_phi_risk(Weights(Eigen::Vector2d(0.5, 0.5), 1.0), d, LossKind::hinge, pair_basis()) == 1.0);
  std::mt19937_64 rng(1);
  const FiniteDistribution c = synthetic_classification(30, 2, 3, 0.2);
  const BaseClass b = stump_basis(2, {{0.0}, {0.0}}, true);
  for (int k = 0; k < 100; ++k) {
    const Weights t(oracle::simplex_point(rng, 4, 2.0), 2.0, Renormalize::yes);
    for (LossKind l : {LossKind::hinge, LossKind::exponential, LossKind::logit})
      CHECK(exact_phi_risk(t, c, l, b) >= 0.0);
  }
  CHECK_THROWS_AS(ExactRisk(d, LossKind::squared, pair_basis()), DomainError);
  const FiniteDistribution r(DataKind::regression, {{vec1(0.5), 0.2, 1.0}});
  CHECK_THROWS_AS(ExactRisk(r, LossKind::hinge, pair_basis()), DomainError);
  CHECK(exact_phi_risk(Weights(Eigen::Vector2d(1, 0), 1.0), r, LossKind::squared, pair_basis()) ==
        doctest::Approx(0.64));
}

TEST_CASE("exact_gradient matches finite differences (exponential loss)") {
  std::mt19937_64 rng(2);
  const FiniteDistribution c = synthetic_classification(30, 2, 5, 0.2);
  const BaseClass b = stump_basis(2, {{-0.3, 0.4}, {0.1}}, true);
  const ExactRisk risk(c, LossKind::exponential, b);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd t = oracle::simplex_point(rng, 6, 1.0);
    const Eigen::VectorXd g = risk.gradient(t);
    for (Eigen::Index j = 0; j < 6; ++j) {
      Eigen::VectorXd tp = t, tm = t;
      tp(j) += 1e-6;
      tm(j) -= 1e-6;
      CHECK(g(j) == doctest::Approx((risk.value(tp) - risk.value(tm)) / 2e-6).epsilon(1e-6));
    }
  }
}

TEST_CASE("exact_gradient agrees with Monte Carlo sub-gradients") {
  auto dist = std::make_shared<const FiniteDistribution>(synthetic_classification(12, 2, 8, 0.2));
  const BaseClass b = stump_basis(2, {{0.0}, {0.2}}, true);
  const Weights t(Eigen::Vector4d(0.1, 0.4, 0.3, 0.2), 1.0);
  CHECK(sampled_noise_zscore(dist, LossKind::logit, b, t, 100000, 3) <= 3.5);
  CHECK(exact_noise_residual(*dist, LossKind::logit, b, t) <= 1e-12);
  CHECK(exact_noise_residual(*dist, LossKind::hinge, b, t) <= 1e-12);
}

TEST_CASE("misclassification") {
  const FiniteDistribution d(DataKind::classification, {{vec1(0.5), 1.0, 0.25}, {vec1(-0.5), 1.0, 0.75}});
  CHECK(misclassification(Weights(Eigen::Vector2d(1, 0), 1.0), d, pair_basis()) == 0.75);
  CHECK(misclassification(Weights(Eigen::Vector2d(0.5, 0.5), 1.0), d, pair_basis()) == 1.0);
}

TEST_CASE("linear program solver") {
  // min −x − y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6.
  Eigen::MatrixXd a(2, 4);
  a << 1, 2, 1, 0, 3, 1, 0, 1;
  const auto sol = detail::solve_linear_program(a, Eigen::Vector2d(4, 6), Eigen::Vector4d(-1, -1, 0, 0));
  CHECK(sol.objective == doctest::Approx(-2.8));
  CHECK(sol.x(0) == doctest::Approx(1.6));
  CHECK(sol.x(1) == doctest::Approx(1.2));
  Eigen::MatrixXd inf(1, 1);
  inf << 1;
  CHECK_THROWS_AS(detail::solve_linear_program(inf, Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Ones(1)),
                  NumericalError);
}

TEST_CASE("batch_minimizer: separable problem") {
  const BatchOptimum o = batch_minimizer(separable(), LossKind::hinge, pair_basis(), 1.0);
  CHECK(o.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(o.theta(0) == doctest::Approx(1.0));
}

TEST_CASE("batch_minimizer matches an M = 2 grid") {
  std::mt19937_64 rng(3);
  for (LossKind l : {LossKind::hinge, LossKind::exponential, LossKind::logit}) {
    for (int k = 0; k < 4; ++k) {
      const FiniteDistribution d = synthetic_classification(15, 1, rng(), 0.3);
      const BaseClass b = stump_basis(1, {{-0.2 + 0.1 * k}}, true);
      const ExactRisk risk(d, l, b);
      const BatchOptimum o = batch_minimizer(d, l, b, 1.5);
      const Eigen::VectorXd g = oracle::grid_minimize(
          [&](const Eigen::VectorXd& t) { return risk.value(t); }, 2, 1.5, 1e-10);
      CHECK(std::abs(o.value - risk.value(g)) <= 1e-4);
      CHECK(o.value <= risk.value(g) + 1e-9);
    }
  }
}

TEST_CASE("batch_minimizer: smooth losses reach the gap tolerance") {
  const FiniteDistribution d = synthetic_classification(40, 2, 9, 0.2);
  const BaseClass b = stump_basis(2, {{-0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}}, true);
  for (LossKind l : {LossKind::exponential, LossKind::logit}) {
    const BatchOptimum o = batch_minimizer(d, l, b, 1.0);
    CHECK(o.gap < 1e-8);
    CHECK(o.value <= ExactRisk(d, l, b).value(Weights::uniform(12, 1.0)));
  }
  const FiniteDistribution r = synthetic_regression(16, 2, 9, 0.2);
  CHECK(batch_minimizer(r, LossKind::squared, b, 1.0).gap < 1e-8);
}

TEST_CASE("batch_minimizer: swapping symmetric stumps leaves the value unchanged") {
  const FiniteDistribution d(DataKind::classification,
                             {{vec1(0.5), 1.0, 0.5}, {vec1(-0.5), 1.0, 0.5}});
  const BaseClass b = stump_basis(1, {{0.0}}, true);
  const ExactRisk risk(d, LossKind::logit, b);
  CHECK(risk.value(Eigen::Vector2d(0.3, 0.7)) == doctest::Approx(risk.value(Eigen::Vector2d(0.7, 0.3))));
  const BatchOptimum o = batch_minimizer(d, LossKind::logit, b, 1.0);
  CHECK(o.value == doctest::Approx(risk.value(Eigen::Vector2d(o.theta(1), o.theta(0)))).epsilon(1e-12));
  CHECK(o.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("theoretical_bound") {
  CHECK(theoretical_bound(BoundKind::anytime_thm1, 99, 16, 1.0, 1.0) ==
        doctest::Approx(0.3363857014778576).epsilon(1e-15));
  CHECK(theoretical_bound(BoundKind::fixed_horizon, 100, 16, 1.0, 1.0) ==
        doctest::Approx(0.23548200450309492).epsilon(1e-15));
  CHECK(theoretical_bound(BoundKind::general_thm2, 57, 9, 2.0, 1.5, 0.5, 2.0 * std::log(9.0)) ==
        doctest::Approx(theoretical_bound(BoundKind::anytime_thm1, 57, 9, 2.0, 1.5)).epsilon(1e-14));
  for (long t : {1L, 10L, 1000L})
    for (Eigen::Index m : {2, 16, 100})
      CHECK(theoretical_bound(BoundKind::anytime_thm1, t, m, 1.0, 1.0) ==
            2.0 * std::sqrt(std::log(double(m))) * std::sqrt(t + 1.0) / double(t));
  CHECK_THROWS_AS(theoretical_bound(BoundKind::anytime_thm1, 10, 1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(theoretical_bound(BoundKind::fixed_horizon, 0, 4, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(theoretical_bound(BoundKind::general_thm2, 10, 4, 1.0, 1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("averaged_bound reduces to the closed forms") {
  const ProxyFunction p = ProxyFunction::entropy(1.0, 16);
  const double L = 1.0;
  // Fixed horizon with V(θ*_A) ≤ V*: exactly λL√(2 ln M / t).
  const Schedule f = make_schedule_fixed_horizon(L, p.alpha(), *p.vmax(), 100);
  CHECK(averaged_bound(p, f, L, 100, *p.vmax()) ==
        doctest::Approx(theoretical_bound(BoundKind::fixed_horizon, 100, 16, 1.0, L)).epsilon(1e-13));
  // Anytime: never above the anytime entropic rate.
  const Schedule a = make_schedule_anytime(L, 16);
  for (long t : {1L, 10L, 100L, 1000L})
    CHECK(averaged_bound(p, a, L, t, *p.vmax()) <= theoretical_bound(BoundKind::anytime_thm1, t, 16, 1.0, L));
}

TEST_CASE("regret diagnostic holds on logged runs") {
  auto dist = std::make_shared<const FiniteDistribution>(synthetic_classification(24, 2, 21, 0.15));
  const BaseClass b = stump_basis(2, {{-0.4, 0.3}, {0.0}}, true);
  for (LossKind l : {LossKind::hinge, LossKind::logit}) {
    const double lam = 1.0;
    const ProxyFunction p = ProxyFunction::entropy(lam, b.dim());
    const Schedule s = make_schedule_anytime(lipschitz_constant(l, lam, 1.0), b.dim());
    const auto o = make_oracle(l, lam, 1.0);
    for (int r = 0; r < 5; ++r) {
      SampleStream st(dist, 100 + r);
      const RunResult res = run(make_engine_config(p, s), st, *o, b, 100, true);
      const RegretReport rep = regret_diagnostic(res.trajectory, *dist, l, b, p, s);
      CHECK(rep.max_violation <= 1e-8);
      CHECK(rep.iterations == 100);
    }
  }
  CHECK_THROWS_AS(regret_diagnostic({}, *dist, LossKind::hinge, b, ProxyFunction::entropy(1.0, 6),
                                    make_schedule_anytime(1.0, 6)),
                  UsageError);
}

TEST_CASE("regret diagnostic: single step by hand") {
  auto dist = std::make_shared<const FiniteDistribution>(synthetic_classification(8, 1, 2, 0.0));
  const BaseClass b = stump_basis(1, {{0.0}}, true);
  const ProxyFunction p = ProxyFunction::entropy(1.0, 2);
  const Schedule s = make_schedule_anytime(1.0, 2);
  const auto o = make_oracle(LossKind::hinge, 1.0, 1.0);
  SampleStream st(dist, 4);
  const RunResult res = run(make_engine_config(p, s), st, *o, b, 1, true);
  const ExactRisk risk(*dist, LossKind::hinge, b);
  const Eigen::VectorXd t0 = res.trajectory[0].theta_prev.values();
  const Eigen::VectorXd u = res.trajectory[0].u;
  const Eigen::VectorXd g = risk.gradient(t0);
  double worst = -INFINITY;
  for (Eigen::Index j = 0; j < 2; ++j) {
    const Eigen::VectorXd d = t0 - Weights::vertex(2, j, 1.0).values();
    const double lhs = d.dot(g);
    const double rhs = s.beta(1) * std::log(2.0) - d.dot(u - g) +
                       std::pow(u.lpNorm<Eigen::Infinity>(), 2) / (2.0 * 1.0 * s.beta(0));
    worst = std::max(worst, lhs - rhs);
  }
  CHECK(regret_diagnostic(res.trajectory, risk, p, s).max_violation == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("expectation diagnostic") {
  auto dist = std::make_shared<const FiniteDistribution>(synthetic_classification(16, 2, 6, 0.1));
  const BaseClass b = stump_basis(2, {{0.0}, {0.0}}, true);
  const ProxyFunction p = ProxyFunction::entropy(1.0, 4);
  const Schedule s = make_schedule_anytime(1.0, 4);
  const ExpectationReport rep = expectation_diagnostic(dist, LossKind::hinge, b, p, s, 1.0, 100, 30, 9);
  CHECK(rep.mean_excess >= -1e-9);
  CHECK(rep.mean_excess + 2.0 * rep.stderr_excess <= rep.bound);
}

TEST_CASE("replicate seeds are distinct and stable") {
  CHECK(replicate_seed(0, 0) != replicate_seed(0, 1));
  CHECK(replicate_seed(5, 3) == replicate_seed(5, 3));
}

TEST_CASE("run_experiment: report and CSV") {
  const ExperimentConfig c = small_config();
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.algorithm == "smd");
    CHECK(r.mean_excess >= -1e-9);
    CHECK(r.bound > 0.0);
    CHECK(r.replicates == 6);
    CHECK(r.dim == 6);
  }
  const std::string csv = to_csv(rows);
  CHECK(csv.rfind("algorithm,t,mean_excess,stderr,bound,misclass\nsmd,5,", 0) == 0);
  CHECK(csv == to_csv(run_experiment(c)));
  ExperimentConfig threaded = c;
  threaded.threads = 4;
  CHECK(csv == to_csv(run_experiment(threaded)));
}

TEST_CASE("run_experiment: EG reports last and averaged iterates") {
  ExperimentConfig c = small_config();
  c.algorithm = Algorithm::eg;
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].algorithm == "eg");
  CHECK(rows[2].algorithm == "eg-avg");
  c.algorithm = Algorithm::projected_sgd;
  c.schedule = ScheduleKind::fixed_horizon;
  for (const auto& r : run_experiment(c)) CHECK(r.mean_excess >= -1e-9);
}

TEST_CASE("run_experiment: flat problem gives a constant excess") {
  // Every margin exceeds 1 from the start, so hinge sub-gradients vanish.
  ExperimentConfig c;
  c.distribution.type = "csv";
  const auto path = std::filesystem::temp_directory_path() / "smdagg_flat.csv";
  std::ofstream(path) << "1,0.5\n1,0.7\n";
  c.distribution.path = path.string();
  c.basis.thresholds = {{0.0, 0.1}};
  c.basis.symmetric = false;
  c.lambda = 2.0;
  c.t_grid = {1, 10, 100};
  c.replicates = 3;
  const auto rows = run_experiment(c);
  CHECK(rows[0].mean_excess == rows[1].mean_excess);
  CHECK(rows[1].mean_excess == rows[2].mean_excess);
}

TEST_CASE("run_experiment: regression") {
  ExperimentConfig c = small_config();
  c.distribution.type = "synthetic-regression";
  c.loss = LossKind::squared;
  const auto rows = run_experiment(c);
  for (const auto& r : rows) {
    CHECK(std::isnan(r.misclassification));
    CHECK(r.mean_excess >= -1e-9);
  }
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config();
  c.t_grid = {10, 10};
  CHECK_THROWS_AS(validate(c), DomainError);
  c.t_grid = {10};
  c.replicates = 0;
  CHECK_THROWS_AS(validate(c), DomainError);
  c.replicates = 1;
  c.distribution.type = "gaussian";
  CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("parse_config") {
  const ExperimentConfig c = parse_config(R"({
    "distribution": {"type": "synthetic-classification", "atoms": 32, "input_dim": 2, "seed": 7},
    "basis": {"type": "stumps", "thresholds": [[-0.6, 0.6], [0.0]], "symmetric": true},
    "loss": "logit", "lambda": 2, "proxy": "power", "schedule": "fixed", "algorithm": "eg",
    "t_grid": [10, 100], "replicates": 5, "seed": 18446744073709551615, "threads": 2,
    "output": "out.csv"})");
  CHECK(c.distribution.atoms == 32);
  CHECK(c.basis.thresholds[0][1] == 0.6);
  CHECK(c.loss == LossKind::logit);
  CHECK(c.lambda == 2.0);
  CHECK(c.proxy == "power");
  CHECK(c.schedule == ScheduleKind::fixed_horizon);
  CHECK(c.algorithm == Algorithm::eg);
  CHECK(c.t_grid == std::vector<long>{10, 100});
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.output == "out.csv");
  CHECK_THROWS_AS(parse_config("{"), ParseError);
  CHECK_THROWS_AS(parse_config(R"({"lamda": 1})"), ParseError);
  CHECK_THROWS_AS(parse_config(R"({"lambda": "one"})"), ParseError);
  CHECK_THROWS_AS(parse_config(R"({"t_grid": [5, 1]})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"schedule": "weekly"})"), DomainError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), FileError);
}

TEST_CASE("property checks pass") {
  for (const auto& c : run_property_checks(1)) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "smd/errors.hpp"
#include "smd/projection.hpp"
#include "smd/schedule.hpp"
#include "smd/simplex.hpp"

using smd::Weights;

TEST_CASE("norm_l1") {
  CHECK(smd::norm_l1(Eigen::Vector3d(0, 0, 0)) == 0.0);
  CHECK(smd::norm_l1(Eigen::Vector2d(1, -1)) == 2.0);
  CHECK(smd::norm_l1(Eigen::Vector2d(0.25, 0.75)) == 1.0);
  CHECK_THROWS_AS(smd::norm_l1(Eigen::Vector2d(1, std::nan(""))), smd::DomainError);
}

TEST_CASE("norm_linf") {
  CHECK(smd::norm_linf(Eigen::Vector2d(0, 0)) == 0.0);
  CHECK(smd::norm_linf(Eigen::Vector2d(1, -3)) == 3.0);
  CHECK(smd::norm_linf(Eigen::Vector2d(-0.5, 0.5)) == 0.5);
  CHECK_THROWS_AS(smd::norm_linf(Eigen::Vector2d(INFINITY, 0)), smd::DomainError);
}

TEST_CASE("norms accept expressions") {
  const Eigen::Vector2d a(1, 2), b(3, -1);
  CHECK(smd::norm_l1(a - b) == 5.0);
  CHECK(smd::norm_linf(2.0 * a) == 4.0);
}

TEST_CASE("Weights validation") {
  CHECK_NOTHROW(Weights(Eigen::Vector2d(0.25, 0.75), 1.0));
  CHECK_THROWS_AS(Weights(Eigen::Vector2d(-0.25, 1.25), 1.0), smd::DomainError);
  CHECK_THROWS_AS(Weights(Eigen::Vector2d(0.5, 0.6), 1.0), smd::DomainError);
  CHECK_THROWS_AS(Weights(Eigen::VectorXd::Ones(1), 1.0), smd::DomainError);
  CHECK_THROWS_AS(Weights(Eigen::Vector2d(0.5, 0.5), 0.0), smd::DomainError);
  CHECK_THROWS_AS(Weights(Eigen::Vector2d(0.5, std::nan("")), 1.0), smd::DomainError);
  // Within the 1e-10 tolerance: accepted as is.
  CHECK_NOTHROW(Weights(Eigen::Vector2d(0.5, 0.5 + 5e-11), 1.0));
}

TEST_CASE("Weights renormalization is explicit") {
  const Eigen::Vector2d off(0.5, 0.5 + 5e-11);
  const Weights w(off, 1.0, smd::Renormalize::yes);
  CHECK(std::abs(w.values().sum() - 1.0) < 1e-15);
  const Weights kept(off, 1.0);
  CHECK(kept.values() == off);
}

TEST_CASE("uniform and vertex points") {
  const Weights u = Weights::uniform(3, 2.0);
  for (int j = 0; j < 3; ++j) CHECK(u(j) == doctest::Approx(2.0 / 3.0));
  const Weights v = Weights::vertex(4, 2, 1.5);
  CHECK(v(2) == 1.5);
  CHECK(v.values().sum() == 1.5);
  CHECK_THROWS_AS(Weights::vertex(4, 4, 1.0), smd::DomainError);
}

TEST_CASE("DualVector rejects non-finite entries") {
  CHECK_NOTHROW(smd::DualVector(Eigen::Vector2d(1e300, -1e300)));
  CHECK_THROWS_AS(smd::DualVector(Eigen::Vector2d(0, INFINITY)), smd::DomainError);
}

TEST_CASE("softmax and log_sum_exp are overflow safe") {
  const Eigen::Vector3d x(1000.0, 1000.0, -1000.0);
  const Eigen::VectorXd s = smd::softmax(x, 2.0);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(1.0));
  CHECK(s(2) == 0.0);
  CHECK(smd::log_sum_exp(x) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("Hoelder inequality on random vectors") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 20);
    const Eigen::VectorXd z = oracle::uniform_box(rng, m, 5.0);
    const Eigen::VectorXd t = oracle::uniform_box(rng, m, 3.0);
    CHECK(std::abs(z.dot(t)) <= smd::norm_linf(z) * smd::norm_l1(t) * (1 + 1e-15));
  }
}

TEST_CASE("anytime schedule") {
  const smd::Schedule s = smd::make_schedule_anytime(1.0, 16);
  CHECK(s.kind() == smd::ScheduleKind::anytime);
  CHECK(s.beta0() == doctest::Approx(0.6005612043932249).epsilon(1e-15));
  CHECK(s.beta(3) == doctest::Approx(1.2011224087864498).epsilon(1e-15));
  CHECK(s.gamma(1) == 1.0);
  CHECK(s.gamma(1000) == 1.0);
  CHECK(smd::make_schedule_anytime(2.0, 16).beta0() == 2.0 * s.beta0());
  CHECK_THROWS_AS(smd::make_schedule_anytime(1.0, 1), smd::DomainError);
  CHECK_THROWS_AS(smd::make_schedule_anytime(0.0, 16), smd::DomainError);
}

TEST_CASE("anytime schedule ratio and monotonicity") {
  const smd::Schedule s = smd::make_schedule_anytime(1.3, 7);
  for (long i = 1; i <= 1000000; i += (i < 1000 ? 1 : 997)) {
    const double ratio = s.beta(i) / s.beta(i - 1);
    CHECK(ratio == doctest::Approx(std::sqrt((i + 1.0) / i)).epsilon(1e-15));
    CHECK(s.beta(i) >= s.beta(i - 1));
  }
}

TEST_CASE("fixed-horizon schedule") {
  const smd::Schedule s = smd::make_schedule_fixed_horizon(1.0, 1.0, std::log(16.0), 100);
  CHECK(s.gamma(1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(s.beta(5) == doctest::Approx(0.42466090014400953).epsilon(1e-15));
  CHECK(s.beta(0) == s.beta(7));
  const smd::Schedule one = smd::make_schedule_fixed_horizon(1.0, 1.0, 1.0, 1);
  CHECK(one.gamma(1) == 1.0);
  CHECK(one.beta(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(smd::make_schedule_fixed_horizon(1.0, 1.0, 1.0, 0), smd::DomainError);
}

TEST_CASE("scaled schedules multiply both sequences") {
  const smd::Schedule s = smd::make_schedule_anytime(1.0, 4).scaled(7.3);
  const smd::Schedule base = smd::make_schedule_anytime(1.0, 4);
  for (long i = 1; i < 20; ++i) {
    CHECK(s.unit_gamma(i) == base.unit_gamma(i));
    CHECK(s.unit_beta(i) == base.unit_beta(i));
    CHECK(s.gamma(i) == doctest::Approx(7.3 * base.gamma(i)));
    CHECK(s.beta(i) == doctest::Approx(7.3 * base.beta(i)));
  }
  CHECK_THROWS_AS(base.scaled(0.0), smd::DomainError);
}

TEST_CASE("unit index conventions") {
  const smd::Schedule s = smd::make_schedule_anytime(1.0, 4);
  CHECK_THROWS_AS(s.gamma(0), smd::DomainError);
  CHECK_THROWS_AS(s.beta(-1), smd::DomainError);
}

TEST_CASE("projection: feasible input is a fixed point") {
  const Eigen::Vector3d v(0.2, 0.3, 0.5);
  CHECK((smd::project_to_simplex(v, 1.0) - v).lpNorm<1>() < 1e-15);
}

TEST_CASE("projection: worked cases") {
  const Eigen::VectorXd p = smd::project_to_simplex(Eigen::Vector2d(2.0, 0.0), 1.0);
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(1) == 0.0);
  const Eigen::VectorXd q = smd::project_to_simplex(Eigen::Vector3d(1.0, 1.0, 1.0), 1.5);
  for (int j = 0; j < 3; ++j) CHECK(q(j) == doctest::Approx(0.5));
}

TEST_CASE("projection agrees with a grid oracle on the 2-simplex") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const double lambda = 0.5 + oracle::uniform01(rng);
    const Eigen::VectorXd v = oracle::uniform_box(rng, 3, 1.5);
    const Eigen::VectorXd p = smd::project_to_simplex(v, lambda);
    const Eigen::VectorXd g = oracle::grid_projection(v, lambda);
    CHECK((p - g).lpNorm<1>() <= 1e-6);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() == doctest::Approx(lambda).epsilon(1e-12));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>

#include "oracles.hpp"
#include "smd/data.hpp"
#include "smd/errors.hpp"

using smd::Atom;
using smd::DataKind;
using smd::FiniteDistribution;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("smdagg_test_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

Eigen::VectorXd vec1(double a) { return Eigen::VectorXd::Constant(1, a); }

}  // namespace

TEST_CASE("stump_basis") {
  const smd::BaseClass b = smd::stump_basis(1, {{0.0}}, true);
  CHECK(b.dim() == 2);
  CHECK(b.bound() == 1.0);
  const Eigen::VectorXd h = b.evaluate(vec1(0.5));
  CHECK(h(0) == 1.0);
  CHECK(h(1) == -1.0);
  // Strict threshold: x_d = τ gives −1.
  CHECK(b.evaluate(vec1(0.0))(0) == -1.0);
  CHECK_THROWS_AS(smd::stump_basis(1, {{}}, true), smd::DomainError);
  CHECK_THROWS_AS(smd::stump_basis(2, {{0.0}}, true), smd::DomainError);
}

TEST_CASE("stump outputs are signs and symmetric pairs cancel") {
  std::mt19937_64 rng(1);
  const smd::BaseClass b = smd::stump_basis(3, {{-0.5, 0.5}, {0.0}, {-0.2, 0.1, 0.7}}, true);
  CHECK(b.dim() == 12);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd h = b.evaluate(oracle::uniform_box(rng, 3, 1.0));
    CHECK(h.cwiseAbs().isOnes(0.0));
    for (Eigen::Index j = 0; j < 12; j += 2) CHECK(h(j) + h(j + 1) == 0.0);
  }
}

TEST_CASE("BaseClass enforces its bound") {
  const smd::BaseClass bad(2, 1.0, [](const Eigen::VectorXd&) { return Eigen::Vector2d(0.5, 1.5); });
  CHECK_THROWS_AS(bad.evaluate(vec1(0.0)), smd::DomainError);
}

TEST_CASE("FiniteDistribution validation") {
  CHECK_THROWS_AS(FiniteDistribution(DataKind::classification, {{vec1(0), 0.0, 1.0}}), smd::DomainError);
  CHECK_THROWS_AS(FiniteDistribution(DataKind::classification,
                                     {{vec1(0), 1.0, 0.5}, {vec1(1), -1.0, 0.4}}),
                  smd::DomainError);
  CHECK_THROWS_AS(FiniteDistribution(DataKind::regression, {{vec1(0), 1.0, 0.0}, {vec1(1), 1.0, 1.0}}),
                  smd::DomainError);
  CHECK_NOTHROW(FiniteDistribution(DataKind::regression, {{vec1(0), 0.3, 1.0}}));
}

TEST_CASE("sampling: single atom and replay") {
  auto one = std::make_shared<const FiniteDistribution>(
      DataKind::classification, std::vector<Atom>{{vec1(0.25), 1.0, 1.0}});
  smd::SampleStream s(one, 0);
  for (int k = 0; k < 100; ++k) CHECK(s.next().x(0) == 0.25);
  CHECK(s.position() == 100);

  auto dist = std::make_shared<const FiniteDistribution>(smd::synthetic_classification(10, 2, 3, 0.1));
  smd::SampleStream a(dist, 99), b(dist, 99);
  for (int k = 0; k < 100; ++k) CHECK(a.draw_index() == b.draw_index());
}

TEST_CASE("sampling: equiprobable atoms within 3 sigma") {
  auto dist = std::make_shared<const FiniteDistribution>(
      DataKind::classification, std::vector<Atom>{{vec1(0), 1.0, 0.5}, {vec1(1), -1.0, 0.5}});
  smd::SampleStream s(dist, 12345);
  const int n = 100000;
  int first = 0;
  for (int k = 0; k < n; ++k) first += s.draw_index() == 0;
  CHECK(std::abs(first - n / 2.0) <= 3.0 * std::sqrt(n * 0.25));
}

TEST_CASE("sequential source runs out") {
  auto dist = std::make_shared<const FiniteDistribution>(
      DataKind::classification, std::vector<Atom>{{vec1(0), 1.0, 0.5}, {vec1(1), -1.0, 0.5}});
  smd::SequentialSource s(dist);
  CHECK(s.next().y == 1.0);
  CHECK(s.next().y == -1.0);
  CHECK_THROWS_AS(s.next(), smd::DataExhausted);
}

TEST_CASE("load_dataset") {
  const std::string four = write_temp("four.csv", "1,0.5,2\n-1,0.1,3\n1,0.5,2\n-1,-2,1e-3\n");
  const FiniteDistribution d = smd::load_dataset(four);
  CHECK(d.size() == 4);
  for (const auto& a : d.atoms()) CHECK(a.p == 0.25);
  CHECK(d[0].x == d[2].x);
  CHECK(d[3].x(1) == 1e-3);

  const std::string header = write_temp("header.csv", "y,a\n0.5,1\n-0.2,2\n");
  const FiniteDistribution r = smd::load_dataset(header, {DataKind::regression, true});
  CHECK(r.size() == 2);
  CHECK(r[1].y == -0.2);

  CHECK_THROWS_AS(smd::load_dataset(write_temp("zero.csv", "0,1\n1,2\n")), smd::DomainError);
  try {
    smd::load_dataset(write_temp("bad.csv", "1,0.5\n-1,abc\n"));
    FAIL("expected a parse error");
  } catch (const smd::ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(smd::load_dataset(write_temp("ragged.csv", "1,0.5\n-1,1,2\n")), smd::ParseError);
  CHECK_THROWS_AS(smd::load_dataset("/nonexistent/file.csv"), smd::FileError);
}

TEST_CASE("decision_rule") {
  const smd::BaseClass b = smd::stump_basis(1, {{0.0}}, true);
  const smd::Weights half(Eigen::Vector2d(0.5, 0.5), 1.0);
  CHECK(smd::decision_rule(half, b, vec1(0.3)) == -1);
  const smd::Weights lean(Eigen::Vector2d(0.65, 0.35), 1.0);
  CHECK(smd::decision_rule(lean, b, vec1(0.3)) == 1);
  CHECK(smd::decision_rule(lean, b, vec1(-0.3)) == -1);
}

TEST_CASE("synthetic generators") {
  const FiniteDistribution c = smd::synthetic_classification(32, 2, 7, 0.1);
  CHECK(c.size() == 32);
  for (const auto& a : c.atoms()) CHECK(std::abs(a.y) == 1.0);
  const FiniteDistribution r = smd::synthetic_regression(16, 2, 7, 0.2);
  CHECK(r.max_abs_response() <= 1.0);
  const FiniteDistribution again = smd::synthetic_regression(16, 2, 7, 0.2);
  for (std::size_t k = 0; k < 16; ++k) CHECK(r[k].y == again[k].y);
}

TEST_CASE("quantile thresholds and design matrix") {
  const FiniteDistribution c = smd::synthetic_classification(20, 2, 5, 0.0);
  const auto th = smd::quantile_thresholds(c, 3);
  CHECK(th.size() == 2);
  CHECK(th[0].size() == 3);
  const smd::BaseClass b = smd::stump_basis(2, th, false);
  const Eigen::MatrixXd d = smd::design_matrix(c, b);
  CHECK(d.rows() == 20);
  CHECK(d.cols() == 6);
  CHECK(d.row(4).transpose() == b.evaluate(c[4].x));
}

#include "smd/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smd/errors.hpp"

namespace smd {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::hinge: return "hinge";
    case LossKind::exponential: return "exponential";
    case LossKind::logit: return "logit";
    case LossKind::squared: return "squared";
  }
  return "unknown";
}

LossKind loss_from_name(std::string_view name) {
  if (name == "hinge") return LossKind::hinge;
  if (name == "exponential" || name == "exp") return LossKind::exponential;
  if (name == "logit" || name == "logistic") return LossKind::logit;
  if (name == "squared") return LossKind::squared;
  throw DomainError("unknown loss '" + std::string(name) + "'");
}

double loss_value(LossKind kind, double x) {
  check_finite(x, "loss_value");
  switch (kind) {
    case LossKind::hinge: return x < 1.0 ? 1.0 - x : 0.0;
    case LossKind::exponential: return std::exp(-x);
    case LossKind::logit:
      // log₂(1 + e^{−x}) without overflow for large |x|.
      return (x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x))) / kLn2;
    case LossKind::squared: return (1.0 - x) * (1.0 - x);
  }
  return 0.0;
}

double loss_derivative(LossKind kind, double x) {
  check_finite(x, "loss_derivative");
  switch (kind) {
    case LossKind::hinge: return x < 1.0 ? -1.0 : 0.0;
    case LossKind::exponential: return -std::exp(-x);
    case LossKind::logit:
      return x > 0.0 ? -std::exp(-x) / ((1.0 + std::exp(-x)) * kLn2)
                     : -1.0 / ((1.0 + std::exp(x)) * kLn2);
    case LossKind::squared:
      throw UnsupportedError("loss_derivative: squared loss uses the regression oracle");
  }
  return 0.0;
}

// |φ′| is non-increasing for all three margin losses, so the supremum over
// [−Kλ, Kλ] sits at the left endpoint (hinge: −Kλ < 1 always, giving 1).
double lipschitz_constant(LossKind kind, double lambda, double bound_k) {
  if (!(lambda > 0.0) || !(bound_k > 0.0))
    throw DomainError("lipschitz_constant: lambda and K must be positive");
  if (kind == LossKind::squared)
    throw UnsupportedError("lipschitz_constant: use regression_lipschitz_constant for squared loss");
  const double left = -bound_k * lambda;
  const double right = bound_k * lambda;
  double sup = std::max(std::abs(loss_derivative(kind, left)),
                        std::abs(loss_derivative(kind, right)));
  if (kind == LossKind::hinge && left < 1.0 && 1.0 <= right)
    sup = std::max(sup, std::abs(loss_derivative(kind, std::nextafter(1.0, 0.0))));
  return bound_k * sup;
}

double regression_lipschitz_constant(double lambda, double bound_k, double y_max) {
  if (!(lambda > 0.0) || !(bound_k > 0.0) || !(y_max >= 0.0))
    throw DomainError("regression_lipschitz_constant: invalid arguments");
  return 2.0 * (bound_k * lambda + y_max) * bound_k;
}

SubgradientSample classification_subgradient(LossKind kind, const Eigen::VectorXd& h, double y,
                                             const Weights& theta) {
  if (y != 1.0 && y != -1.0) throw DomainError("classification_subgradient: label must be +1 or -1");
  if (h.size() != theta.size()) throw DomainError("classification_subgradient: dimension mismatch");
  const double margin = y * theta.values().dot(h);
  return {loss_derivative(kind, margin) * y * h, 0};
}

SubgradientSample regression_subgradient(const Eigen::VectorXd& h, double y, const Weights& theta) {
  check_finite(y, "regression_subgradient");
  if (h.size() != theta.size()) throw DomainError("regression_subgradient: dimension mismatch");
  return {2.0 * (theta.values().dot(h) - y) * h, 0};
}

MarginLossOracle::MarginLossOracle(LossKind kind, double lambda, double bound_k)
    : kind_(kind), bound_(lipschitz_constant(kind, lambda, bound_k)) {}

double MarginLossOracle::value(const Weights& theta, const Eigen::VectorXd& h, double y) const {
  return loss_value(kind_, y * theta.values().dot(h));
}

Eigen::VectorXd MarginLossOracle::subgradient(const Weights& theta, const Eigen::VectorXd& h,
                                              double y) const {
  return classification_subgradient(kind_, h, y, theta).u;
}

SquaredLossOracle::SquaredLossOracle(double lambda, double bound_k, double y_max)
    : bound_(regression_lipschitz_constant(lambda, bound_k, y_max)) {}

double SquaredLossOracle::value(const Weights& theta, const Eigen::VectorXd& h, double y) const {
  const double r = y - theta.values().dot(h);
  return r * r;
}

Eigen::VectorXd SquaredLossOracle::subgradient(const Weights& theta, const Eigen::VectorXd& h,
                                               double y) const {
  return regression_subgradient(h, y, theta).u;
}

std::unique_ptr<LossOracle> make_oracle(LossKind kind, double lambda, double bound_k,
                                        double y_max) {
  if (kind == LossKind::squared) return std::make_unique<SquaredLossOracle>(lambda, bound_k, y_max);
  return std::make_unique<MarginLossOracle>(kind, lambda, bound_k);
}

}  // namespace smd

#include "smd/bounds.hpp"

#include <cmath>
#include <string>

#include "smd/errors.hpp"

namespace smd {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string("bound: ") + name + " must be positive and finite");
}

}  // namespace

double theoretical_bound(BoundKind kind, long t, Eigen::Index dim, double lambda, double lipschitz,
                         double alpha, double vbar) {
  if (t < 1) throw DomainError("bound: t must be >= 1");
  require_positive(lipschitz, "L");
  const double td = static_cast<double>(t);
  switch (kind) {
    case BoundKind::anytime_thm1:
    case BoundKind::fixed_horizon: {
      if (dim < 2) throw DomainError("bound: M must be >= 2");
      require_positive(lambda, "lambda");
      const double log_m = std::log(static_cast<double>(dim));
      if (kind == BoundKind::anytime_thm1)
        return 2.0 * lambda * lipschitz * std::sqrt(log_m) * std::sqrt(td + 1.0) / td;
      return lambda * lipschitz * std::sqrt(2.0 * log_m / td);
    }
    case BoundKind::general_thm2:
      require_positive(alpha, "alpha");
      require_positive(vbar, "Vbar");
      return 2.0 * lipschitz * std::sqrt(vbar / alpha) * std::sqrt(td + 1.0) / td;
  }
  throw DomainError("bound: unknown kind");
}

double fixed_horizon_general_bound(long t, double lipschitz, double alpha, double vstar) {
  if (t < 1) throw DomainError("bound: t must be >= 1");
  require_positive(lipschitz, "L");
  require_positive(alpha, "alpha");
  require_positive(vstar, "V*");
  return lipschitz * std::sqrt(2.0 * vstar / (alpha * static_cast<double>(t)));
}

double averaged_bound(const ProxyFunction& proxy, const Schedule& schedule, double lipschitz,
                      long t, double v_at_optimum) {
  if (t < 1) throw DomainError("bound: t must be >= 1");
  require_positive(lipschitz, "L");
  double gamma_sum = 0.0;
  double quad = 0.0;
  for (long i = 1; i <= t; ++i) {
    const double g = schedule.gamma(i);
    gamma_sum += g;
    quad += g * g / (2.0 * proxy.alpha() * schedule.beta(i - 1));
  }
  const double v_star = proxy.value(proxy.minimizer());
  return (schedule.beta(t) * v_at_optimum - schedule.beta0() * v_star +
          lipschitz * lipschitz * quad) /
         gamma_sum;
}

}  // namespace smd

#include "smd/proxy.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace smd {

std::string_view to_string(ProxyKind kind) {
  switch (kind) {
    case ProxyKind::entropy: return "entropy";
    case ProxyKind::power: return "power";
    case ProxyKind::pnorm: return "pnorm";
    case ProxyKind::euclidean: return "euclidean";
  }
  return "unknown";
}

ProxyFunction::ProxyFunction(ProxyKind kind, double lambda, Eigen::Index dim, double alpha,
                             std::optional<double> vmax)
    : kind_(kind),
      lambda_(lambda),
      dim_(dim),
      alpha_(alpha),
      minimizer_(Weights::uniform(dim, lambda)),
      vmax_(vmax) {}

namespace {

void check_args(double lambda, Eigen::Index dim) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("proxy: lambda must be positive and finite");
  if (dim < 2) throw DomainError("proxy: M must be >= 2");
}

}  // namespace

ProxyFunction ProxyFunction::entropy(double lambda, Eigen::Index dim) {
  check_args(lambda, dim);
  return {ProxyKind::entropy, lambda, dim, 1.0 / lambda,
          lambda * std::log(static_cast<double>(dim))};
}

// The Hessian of V is diag(λ^{1−s} θ_j^{s−1}); its ℓ1 modulus on the simplex
// is 1/Σ_j λ^{s−1}θ_j^{1−s} ≥ 1/(M^s) = 1/e, attained at the uniform point.
// This needs s ≤ 1: for M = 2 the Hessian vanishes on the boundary.
ProxyFunction ProxyFunction::power(double lambda, Eigen::Index dim) {
  check_args(lambda, dim);
  if (dim < 3)
    throw DomainError("power proxy: requires M >= 3 (not strongly convex for M = 2)");
  const double log_m = std::log(static_cast<double>(dim));
  const double vmax = lambda * lambda * (1.0 - std::exp(-1.0)) * log_m * log_m / (log_m + 1.0);
  return {ProxyKind::power, lambda, dim, std::exp(-1.0), vmax};
}

// ½‖·‖_p² is (p−1)-strongly convex in ℓ_p for p ∈ (1, 2]; ‖h‖_p ≥ M^{1/p−1}‖h‖_1
// turns that into (p−1) M^{2/p−2} / λ² in ℓ1.
ProxyFunction ProxyFunction::pnorm(double lambda, Eigen::Index dim) {
  check_args(lambda, dim);
  if (dim < 3)
    throw DomainError("pnorm proxy: requires M >= 3 (p = 1 + 1/ln M exceeds 2 for M = 2)");
  const double p = pnorm_exponent<double>(dim);
  const double alpha =
      (p - 1.0) * std::pow(static_cast<double>(dim), 2.0 / p - 2.0) / (lambda * lambda);
  return {ProxyKind::pnorm, lambda, dim, alpha, 0.5};
}

ProxyFunction ProxyFunction::euclidean(double lambda, Eigen::Index dim) {
  check_args(lambda, dim);
  return {ProxyKind::euclidean, lambda, dim, 2.0 / static_cast<double>(dim), lambda * lambda};
}

ProxyFunction ProxyFunction::from_name(std::string_view name, double lambda, Eigen::Index dim) {
  if (name == "entropy") return entropy(lambda, dim);
  if (name == "power") return power(lambda, dim);
  if (name == "pnorm") return pnorm(lambda, dim);
  if (name == "euclidean") return euclidean(lambda, dim);
  if (name == "l1")
    throw DomainError(
        "proxy 'l1': the l1 penalty is not a proxy function (not strongly convex with "
        "respect to the l1 norm, so its conjugate has no Lipschitz gradient)");
  throw DomainError("unknown proxy '" + std::string(name) + "'");
}

double ProxyFunction::value(const Weights& theta) const {
  if (theta.size() != dim_) throw DomainError("proxy: dimension mismatch");
  switch (kind_) {
    case ProxyKind::entropy: return entropy_value(theta);
    case ProxyKind::power: return power_value(theta);
    case ProxyKind::pnorm: return pnorm_value(theta);
    case ProxyKind::euclidean: return euclidean_value(theta);
  }
  return 0.0;
}

Eigen::VectorXd ProxyFunction::gradient(const Weights& theta) const {
  if (theta.size() != dim_) throw DomainError("proxy: dimension mismatch");
  const Eigen::ArrayXd x = theta.values().array();
  switch (kind_) {
    case ProxyKind::entropy:
      return (x.log() + 1.0).matrix();
    case ProxyKind::power: {
      const PowerConstants<double> k(dim_, lambda_);
      return (k.c1 * (k.s + 1.0) * x.pow(k.s)).matrix();
    }
    case ProxyKind::pnorm: {
      const double p = pnorm_exponent<double>(dim_);
      const double norm = std::pow(x.pow(p).sum(), 1.0 / p);
      if (norm == 0.0) return Eigen::VectorXd::Zero(dim_);
      return (std::pow(norm, 2.0 - p) * x.pow(p - 1.0) / (lambda_ * lambda_)).matrix();
    }
    case ProxyKind::euclidean:
      return 2.0 * theta.values();
  }
  return Eigen::VectorXd::Zero(dim_);
}

MirrorMapResult ProxyFunction::mirror_map(const DualVector& z, double beta, double tol) const {
  if (z.size() != dim_) throw DomainError("proxy: dual vector dimension mismatch");
  switch (kind_) {
    case ProxyKind::entropy: return entropy_mirror_map(z, beta, lambda_);
    case ProxyKind::power: return power_mirror_map(z, beta, lambda_, tol);
    case ProxyKind::euclidean: return euclidean_mirror_map(z, beta, lambda_);
    case ProxyKind::pnorm: return generic_mirror_map(*this, z, beta, std::min(tol, 1e-12));
  }
  throw UnsupportedError("proxy: no mirror map");
}

double ProxyFunction::conjugate_value(const DualVector& z, double beta, double tol) const {
  if (kind_ == ProxyKind::entropy) return entropy_conjugate_value(z, beta, lambda_);
  const MirrorMapResult r = mirror_map(z, beta, tol);
  return r.wvalue ? *r.wvalue : -z.values().dot(r.theta.values()) - beta * value(r.theta);
}

MirrorMapResult generic_mirror_map(const ProxyFunction& proxy, const DualVector& z, double beta,
                                   double tol, long max_iter) {
  detail::require_temperature(beta);
  if (!(tol > 0.0)) throw DomainError("generic_mirror_map: tol must be positive");
  if (z.size() != proxy.dim()) throw DomainError("generic_mirror_map: dimension mismatch");
  const double lambda = proxy.lambda();
  const Eigen::VectorXd& zv = z.values();

  auto objective = [&](const Weights& w) { return zv.dot(w.values()) + beta * proxy.value(w); };

  Weights theta = Weights::uniform(proxy.dim(), lambda);
  double f = objective(theta);
  double step = 1.0 / beta;
  for (long iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd grad = zv + beta * proxy.gradient(theta);
    const Eigen::ArrayXd log_theta = theta.values().array().log();
    for (;;) {
      // Components that reached zero stay there (multiplicative update).
      const Eigen::VectorXd logits =
          (theta.values().array() > 0.0)
              .select(log_theta - step * grad.array(),
                      -std::numeric_limits<double>::infinity())
              .matrix();
      Weights next(softmax(logits, lambda), lambda, Renormalize::yes);
      const double f_next = objective(next);
      // Relative smoothness test against the KL divergence of the step.
      double kl = 0.0;
      for (Eigen::Index j = 0; j < next.size(); ++j) {
        const double a = next(j);
        if (a > 0.0) kl += a * (std::log(a) - log_theta(j));
      }
      const double model = f + grad.dot(next.values() - theta.values()) + kl / step;
      if (f_next <= model + 1e-13 * (1.0 + std::abs(f)) || step < 1e-300) {
        const double change = (next.values() - theta.values()).lpNorm<1>();
        theta = std::move(next);
        f = f_next;
        if (change < tol) {
          const double w = -zv.dot(theta.values()) - beta * proxy.value(theta);
          return {std::move(theta), w};
        }
        break;
      }
      step *= 0.5;
    }
  }
  throw NumericalError("generic_mirror_map: no convergence within " + std::to_string(max_iter) +
                       " iterations");
}

double performance_ratio(const ProxyFunction& proxy) {
  if (!proxy.vmax()) throw UnsupportedError("performance_ratio: unknown maximum of V");
  return *proxy.vmax() / proxy.alpha();
}

}  // namespace smd

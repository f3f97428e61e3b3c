#ifndef SMD_PROXY_HPP
#define SMD_PROXY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "smd/errors.hpp"
#include "smd/projection.hpp"
#include "smd/simplex.hpp"

namespace smd {

/// θ = −∇W_β(z), optionally with the conjugate value W_β(z).
template <typename Scalar>
struct BasicMirrorMapResult {
  BasicWeights<Scalar> theta;
  std::optional<Scalar> wvalue;
};

using MirrorMapResult = BasicMirrorMapResult<double>;

namespace detail {

template <typename Scalar>
void require_temperature(Scalar beta) {
  if (!(beta > Scalar(0)) || !std::isfinite(static_cast<double>(beta)))
    throw DomainError("temperature beta must be positive and finite");
}

template <typename Scalar>
Scalar xlogx(Scalar x) {
  return x > Scalar(0) ? x * std::log(x) : Scalar(0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entropy proxy: V(θ) = λ ln(M/λ) + Σ θ_j ln θ_j, α = 1/λ, V* = λ ln M.

template <typename Scalar>
Scalar entropy_value(const BasicWeights<Scalar>& theta) {
  const Scalar lambda = theta.mass();
  const auto dim = static_cast<Scalar>(theta.size());
  Scalar acc = lambda * std::log(dim / lambda);
  for (Eigen::Index j = 0; j < theta.size(); ++j) acc += detail::xlogx(theta(j));
  return acc;
}

/// W_β(z) = λβ ln((1/M) Σ_k exp(−z_k/β)).
template <typename Scalar>
Scalar entropy_conjugate_value(const BasicDualVector<Scalar>& z, Scalar beta, Scalar lambda) {
  detail::require_temperature(beta);
  const auto dim = static_cast<Scalar>(z.size());
  return lambda * beta * (log_sum_exp(-z.values() / beta) - std::log(dim));
}

/// Gibbs weights λ·softmax(−z/β); also returns W_β(z).
template <typename Scalar>
BasicMirrorMapResult<Scalar> entropy_mirror_map(const BasicDualVector<Scalar>& z, Scalar beta,
                                                Scalar lambda) {
  detail::require_temperature(beta);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> energies = -z.values() / beta;
  BasicWeights<Scalar> theta(softmax(energies, lambda), lambda);
  const Scalar w =
      lambda * beta * (log_sum_exp(energies) - std::log(static_cast<Scalar>(z.size())));
  return {std::move(theta), w};
}

/// ∇²W_β(z) with entries (λ/β)(a_i δ_ij − a_i a_j), a = softmax(−z/β).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> entropy_hessian(
    const BasicDualVector<Scalar>& z, Scalar beta, Scalar lambda) {
  detail::require_temperature(beta);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> a = softmax(-z.values() / beta, Scalar(1));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h = -a * a.transpose();
  h.diagonal() += a;
  return (lambda / beta) * h;
}

// ---------------------------------------------------------------------------
// Power proxy: V(θ) = C0 + C1 Σ θ_j^{s+1}, s = 1/ln M, calibrated so that
// min V = V(uniform) = 0.

template <typename Scalar>
struct PowerConstants {
  Scalar s, c0, c1;

  PowerConstants(Eigen::Index dim, Scalar lambda) {
    if (dim < 2) throw DomainError("power proxy: M must be >= 2");
    s = Scalar(1) / std::log(static_cast<Scalar>(dim));
    const Scalar ss1 = s * (s + Scalar(1));
    c0 = -lambda * lambda / (std::exp(Scalar(1)) * ss1);
    c1 = std::pow(lambda, Scalar(1) - s) / ss1;
  }
};

template <typename Scalar>
Scalar power_value(const BasicWeights<Scalar>& theta) {
  const PowerConstants<Scalar> k(theta.size(), theta.mass());
  return k.c0 + k.c1 * theta.values().array().pow(k.s + Scalar(1)).sum();
}

/// argmin_θ {zᵀθ + βV(θ)} for the power proxy, by bisection on the
/// Lagrange multiplier of Σθ = λ.
///
/// θ_j(μ) = max(0, (μ − z_j)/(βC1(s+1)))^{1/s} is monotone in μ; after
/// shifting z by its minimum the root lies in [0, βC1(s+1)λ^s].
template <typename Scalar>
BasicMirrorMapResult<Scalar> power_mirror_map(const BasicDualVector<Scalar>& z, Scalar beta,
                                              Scalar lambda, Scalar tol = Scalar(1e-10),
                                              int max_iter = 200) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  detail::require_temperature(beta);
  if (!(tol > Scalar(0))) throw DomainError("power_mirror_map: tol must be positive");
  const PowerConstants<Scalar> k(z.size(), lambda);
  const Scalar scale = beta * k.c1 * (k.s + Scalar(1));
  const Scalar inv_s = Scalar(1) / k.s;
  const Vec shifted = z.values().array() - z.values().minCoeff();

  auto theta_at = [&](Scalar mu) -> Vec {
    return ((mu - shifted.array()) / scale).cwiseMax(Scalar(0)).pow(inv_s).matrix();
  };

  Scalar lo(0);
  Scalar hi = scale * std::pow(lambda, k.s);
  Vec theta = theta_at(hi);
  Scalar residual = theta.sum() - lambda;
  int iter = 0;
  for (; iter < max_iter && std::abs(residual) >= tol; ++iter) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    theta = theta_at(mid);
    residual = theta.sum() - lambda;
    if (residual > Scalar(0)) hi = mid; else lo = mid;
  }
  if (std::abs(residual) >= tol)
    throw NumericalError("power_mirror_map: bisection did not converge after " +
                         std::to_string(iter) + " iterations (residual " +
                         std::to_string(static_cast<double>(residual)) + ", bracket [" +
                         std::to_string(static_cast<double>(lo)) + ", " +
                         std::to_string(static_cast<double>(hi)) + "])");
  BasicWeights<Scalar> w(std::move(theta), lambda, Renormalize::yes);
  const Scalar v = power_value(w);
  const Scalar wvalue = -z.values().dot(w.values()) - beta * v;
  return {std::move(w), wvalue};
}

// ---------------------------------------------------------------------------
// p-norm proxy: V(θ) = ‖θ‖_p² / (2λ²), p = 1 + 1/ln M.

template <typename Scalar>
Scalar pnorm_exponent(Eigen::Index dim) {
  return Scalar(1) + Scalar(1) / std::log(static_cast<Scalar>(dim));
}

template <typename Scalar>
Scalar pnorm_value(const BasicWeights<Scalar>& theta) {
  const Scalar p = pnorm_exponent<Scalar>(theta.size());
  const Scalar lambda = theta.mass();
  const Scalar sum = theta.values().array().pow(p).sum();
  return std::pow(sum, Scalar(2) / p) / (Scalar(2) * lambda * lambda);
}

// ---------------------------------------------------------------------------
// Squared Euclidean penalty V(θ) = ‖θ‖₂²; α = 2/M in ℓ1.

template <typename Scalar>
Scalar euclidean_value(const BasicWeights<Scalar>& theta) {
  return theta.values().squaredNorm();
}

/// argmin_θ {zᵀθ + β‖θ‖₂²} = Π_simplex(−z/(2β)).
template <typename Scalar>
BasicMirrorMapResult<Scalar> euclidean_mirror_map(const BasicDualVector<Scalar>& z, Scalar beta,
                                                  Scalar lambda) {
  detail::require_temperature(beta);
  BasicWeights<Scalar> w(project_to_simplex(-z.values() / (Scalar(2) * beta), lambda), lambda,
                         Renormalize::yes);
  const Scalar wvalue = -z.values().dot(w.values()) - beta * euclidean_value(w);
  return {std::move(w), wvalue};
}

// ---------------------------------------------------------------------------

enum class ProxyKind { entropy, power, pnorm, euclidean };

std::string_view to_string(ProxyKind kind);

/// A proxy function V on the λ-simplex together with its strong-convexity
/// modulus α (w.r.t. ℓ1), minimizer θ* and maximum V*.
class ProxyFunction {
 public:
  static ProxyFunction entropy(double lambda, Eigen::Index dim);
  /// Requires M ≥ 3 so that s = 1/ln M ≤ 1.
  static ProxyFunction power(double lambda, Eigen::Index dim);
  /// Requires M ≥ 3 so that p = 1 + 1/ln M ≤ 2.
  static ProxyFunction pnorm(double lambda, Eigen::Index dim);
  static ProxyFunction euclidean(double lambda, Eigen::Index dim);

  /// Parses "entropy", "power", "pnorm", "euclidean". The ℓ1 penalty is
  /// rejected: it is not strongly convex in ℓ1.
  static ProxyFunction from_name(std::string_view name, double lambda, Eigen::Index dim);

  ProxyKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  Eigen::Index dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  const Weights& minimizer() const noexcept { return minimizer_; }
  std::optional<double> vmax() const noexcept { return vmax_; }

  double value(const Weights& theta) const;
  /// ∇V(θ); entropy components are −∞ at θ_j = 0.
  Eigen::VectorXd gradient(const Weights& theta) const;

  /// −∇W_β(z) using the closed form or dedicated solver for this kind.
  MirrorMapResult mirror_map(const DualVector& z, double beta, double tol = 1e-10) const;
  /// W_β(z) = sup_θ {−zᵀθ − βV(θ)}.
  double conjugate_value(const DualVector& z, double beta, double tol = 1e-10) const;

 private:
  ProxyFunction(ProxyKind kind, double lambda, Eigen::Index dim, double alpha,
                std::optional<double> vmax);

  ProxyKind kind_;
  double lambda_;
  Eigen::Index dim_;
  double alpha_;
  Weights minimizer_;
  std::optional<double> vmax_;
};

/// Numerical mirror map for any proxy: entropic mirror descent on
/// zᵀθ + βV(θ) with non-increasing (backtracked) steps, stopping when the
/// ℓ1 change between iterates drops below tol.
MirrorMapResult generic_mirror_map(const ProxyFunction& proxy, const DualVector& z, double beta,
                                   double tol = 1e-12, long max_iter = 100000);

/// V*/α, the proxy-dependent factor of the excess-risk bound.
double performance_ratio(const ProxyFunction& proxy);

}  // namespace smd

#endif  // SMD_PROXY_HPP

#ifndef SMD_SIMPLEX_HPP
#define SMD_SIMPLEX_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "smd/errors.hpp"

namespace smd {

/// Absolute tolerance on Σθ − λ for points of the λ-simplex.
inline constexpr double kMassTolerance = 1e-10;

template <typename Derived>
typename Derived::Scalar norm_l1(const Eigen::MatrixBase<Derived>& v) {
  if (!v.allFinite()) throw DomainError("norm_l1: non-finite input");
  return v.cwiseAbs().sum();
}

template <typename Derived>
typename Derived::Scalar norm_linf(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (!v.allFinite()) throw DomainError("norm_linf: non-finite input");
  if (v.size() == 0) return Scalar(0);
  return v.cwiseAbs().maxCoeff();
}

enum class Renormalize : bool { no = false, yes = true };

/// A point of the λ-simplex {θ ∈ R^M : θ ≥ 0, Σθ = λ}, M ≥ 2.
///
/// Construction validates the invariants and throws DomainError on
/// violation. With Renormalize::yes, components in [−tol, 0) are clamped
/// and the vector is rescaled to mass λ; anything further off is still
/// rejected.
template <typename Scalar>
class BasicWeights {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicWeights(Vector values, Scalar mass, Renormalize renorm = Renormalize::no)
      : values_(std::move(values)), mass_(mass) {
    if (!(mass_ > Scalar(0)) || !std::isfinite(static_cast<double>(mass_)))
      throw DomainError("Weights: mass must be positive and finite");
    if (values_.size() < 2) throw DomainError("Weights: dimension M must be >= 2");
    if (!values_.allFinite()) throw DomainError("Weights: non-finite component");
    const Scalar tol = Scalar(kMassTolerance);
    if (renorm == Renormalize::yes) {
      if (values_.minCoeff() < -tol)
        throw DomainError("Weights: component below -tolerance cannot be renormalized");
      values_ = values_.cwiseMax(Scalar(0));
      const Scalar total = values_.sum();
      if (!(total > Scalar(0))) throw DomainError("Weights: zero total mass");
      values_ *= mass_ / total;
      return;
    }
    if (values_.minCoeff() < Scalar(0))
      throw DomainError("Weights: negative component");
    const Scalar total = values_.sum();
    if (std::abs(total - mass_) > tol)
      throw DomainError("Weights: components sum to " + std::to_string(static_cast<double>(total)) +
                        ", expected " + std::to_string(static_cast<double>(mass_)));
  }

  static BasicWeights uniform(Eigen::Index dim, Scalar mass) {
    if (dim < 2) throw DomainError("Weights: dimension M must be >= 2");
    return BasicWeights(Vector::Constant(dim, mass / Scalar(dim)), mass);
  }

  static BasicWeights vertex(Eigen::Index dim, Eigen::Index j, Scalar mass) {
    if (j < 0 || j >= dim) throw DomainError("Weights: vertex index out of range");
    Vector v = Vector::Zero(dim);
    v(j) = mass;
    return BasicWeights(std::move(v), mass);
  }

  const Vector& values() const noexcept { return values_; }
  Scalar mass() const noexcept { return mass_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  Scalar operator()(Eigen::Index j) const { return values_(j); }

 private:
  Vector values_;
  Scalar mass_;
};

/// Element of the dual space (ℓ∞ normed). Entries must be finite.
template <typename Scalar>
class BasicDualVector {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BasicDualVector(Vector values) : values_(std::move(values)) {
    if (!values_.allFinite()) throw DomainError("DualVector: non-finite entry");
  }

  static BasicDualVector zero(Eigen::Index dim) { return BasicDualVector(Vector::Zero(dim)); }

  const Vector& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  Scalar operator()(Eigen::Index j) const { return values_(j); }

 private:
  Vector values_;
};

using Weights = BasicWeights<double>;
using DualVector = BasicDualVector<double>;

/// log Σ_k exp(x_k) with max-shift.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& x) {
  using std::exp;
  using std::log;
  const auto m = x.maxCoeff();
  return m + log((x.array() - m).exp().sum());
}

/// mass · exp(x) / Σ exp(x), computed with max-shift.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(
    const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar mass) {
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  const auto m = x.maxCoeff();
  Vec e = (x.array() - m).exp().matrix();
  return e * (mass / e.sum());
}

}  // namespace smd

#endif  // SMD_SIMPLEX_HPP

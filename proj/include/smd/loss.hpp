#ifndef SMD_LOSS_HPP
#define SMD_LOSS_HPP

#include <memory>
#include <string_view>

#include <Eigen/Dense>

#include "smd/simplex.hpp"

namespace smd {

enum class LossKind { hinge, exponential, logit, squared };

std::string_view to_string(LossKind kind);
LossKind loss_from_name(std::string_view name);

/// φ(x): hinge (1−x)_+, exponential e^{−x}, logit log₂(1+e^{−x}),
/// squared (1−x)².
double loss_value(LossKind kind, double x);

/// Right-continuous monotone version of φ′. The hinge kink x = 1 maps to 0.
/// Throws UnsupportedError for the squared loss (handled by the regression
/// oracle instead).
double loss_derivative(LossKind kind, double x);

/// L_φ(λ) = K · sup_{|x| ≤ Kλ} |φ′(x)|.
double lipschitz_constant(LossKind kind, double lambda, double bound_k);

/// L_{Θ,Q} for the squared loss: sup ‖2(θᵀH − y)H‖∞ ≤ 2(Kλ + y_max)K.
double regression_lipschitz_constant(double lambda, double bound_k, double y_max);

/// A stochastic sub-gradient u_i(θ) together with its iteration index.
struct SubgradientSample {
  Eigen::VectorXd u;
  long context = 0;
};

/// u(θ) = φ′(y θᵀH) y H.
SubgradientSample classification_subgradient(LossKind kind, const Eigen::VectorXd& h, double y,
                                             const Weights& theta);

/// u(θ) = 2(θᵀH − y) H, the gradient of (y − θᵀH)².
SubgradientSample regression_subgradient(const Eigen::VectorXd& h, double y, const Weights& theta);

/// Q(θ, z) with z = (H(x), y), its sub-gradient in θ, and a bound
/// L_{Θ,Q} on ‖∇_θ Q‖∞ over the simplex.
class LossOracle {
 public:
  virtual ~LossOracle() = default;
  virtual double value(const Weights& theta, const Eigen::VectorXd& h, double y) const = 0;
  virtual Eigen::VectorXd subgradient(const Weights& theta, const Eigen::VectorXd& h,
                                      double y) const = 0;
  virtual double linf_bound() const = 0;
  virtual LossKind kind() const = 0;
  virtual bool is_regression() const { return kind() == LossKind::squared; }
};

/// Margin losses φ(yθᵀH) with labels in {−1, +1}.
class MarginLossOracle final : public LossOracle {
 public:
  MarginLossOracle(LossKind kind, double lambda, double bound_k);
  double value(const Weights& theta, const Eigen::VectorXd& h, double y) const override;
  Eigen::VectorXd subgradient(const Weights& theta, const Eigen::VectorXd& h,
                              double y) const override;
  double linf_bound() const override { return bound_; }
  LossKind kind() const override { return kind_; }

 private:
  LossKind kind_;
  double bound_;
};

/// Q(θ, (H, y)) = (y − θᵀH)².
class SquaredLossOracle final : public LossOracle {
 public:
  SquaredLossOracle(double lambda, double bound_k, double y_max);
  double value(const Weights& theta, const Eigen::VectorXd& h, double y) const override;
  Eigen::VectorXd subgradient(const Weights& theta, const Eigen::VectorXd& h,
                              double y) const override;
  double linf_bound() const override { return bound_; }
  LossKind kind() const override { return LossKind::squared; }

 private:
  double bound_;
};

/// Margin oracle for classification kinds, squared oracle for LossKind::squared.
std::unique_ptr<LossOracle> make_oracle(LossKind kind, double lambda, double bound_k,
                                        double y_max = 1.0);

}  // namespace smd

#endif  // SMD_LOSS_HPP

#ifndef SMD_RISK_HPP
#define SMD_RISK_HPP

#include <string>

#include <Eigen/Dense>

#include "smd/data.hpp"
#include "smd/loss.hpp"
#include "smd/simplex.hpp"

namespace smd {

/// A(θ) on a finite-support law, with H(x) tabulated once per atom.
///
/// Classification: A(θ) = Σ_a p_a φ(y_a θᵀH_a), ∇A(θ) = Σ_a p_a φ′(y_a θᵀH_a) y_a H_a.
/// Regression (squared loss): A(θ) = Σ_a p_a (y_a − θᵀH_a)².
class ExactRisk {
 public:
  ExactRisk(const FiniteDistribution& dist, LossKind loss, const BaseClass& basis);

  double value(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
  /// P(Y ≠ g_θ(X)) with g_θ(x) = +1 iff θᵀH(x) > 0. Classification only.
  double misclassification(const Eigen::VectorXd& theta) const;

  double value(const Weights& theta) const { return value(theta.values()); }
  Eigen::VectorXd gradient(const Weights& theta) const { return gradient(theta.values()); }

  LossKind loss() const noexcept { return loss_; }
  DataKind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return design_.cols(); }
  const Eigen::MatrixXd& design() const noexcept { return design_; }
  const Eigen::VectorXd& responses() const noexcept { return y_; }
  const Eigen::VectorXd& probabilities() const noexcept { return p_; }

 private:
  LossKind loss_;
  DataKind kind_;
  Eigen::MatrixXd design_;
  Eigen::VectorXd y_;
  Eigen::VectorXd p_;
};

double exact_phi_risk(const Weights& theta, const FiniteDistribution& dist, LossKind loss,
                      const BaseClass& basis);

Eigen::VectorXd exact_gradient(const Weights& theta, const FiniteDistribution& dist,
                               LossKind loss, const BaseClass& basis);

double misclassification(const Weights& theta, const FiniteDistribution& dist,
                         const BaseClass& basis);

/// max over vertices v of (θ − v)ᵀg = θᵀg − λ min_j g_j; an upper bound on
/// A(θ) − min A when g ∈ ∂A(θ).
double first_order_gap(const Weights& theta, const Eigen::VectorXd& grad);

struct BatchOptimum {
  Weights theta;
  double value;
  /// First-order gap at theta (hinge: certified LP optimum, reported for reference).
  double gap;
  long iterations;
  std::string method;
};

/// min_{θ ∈ Θ_{M,λ}} A(θ).
///
/// Smooth losses: accelerated entropic mirror descent on the exact gradient
/// with backtracking and restarts, stopped when the first-order gap is
/// below tol. Hinge (piecewise linear): exact linear program. For M ≤ 3 a
/// grid with step 1e-3·λ is also scanned and the better point returned.
BatchOptimum batch_minimizer(const FiniteDistribution& dist, LossKind loss, const BaseClass& basis,
                             double lambda, double tol = 1e-8, long max_iter = 1000000);

namespace detail {

struct LinearProgramSolution {
  Eigen::VectorXd x;
  double objective;
  long pivots;
};

/// min cᵀx subject to Ax = b, x ≥ 0 (two-phase dense simplex, Bland's
/// rule after degenerate stalls). Throws NumericalError if infeasible,
/// unbounded or the pivot cap is hit.
LinearProgramSolution solve_linear_program(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                           const Eigen::VectorXd& c);

}  // namespace detail

}  // namespace smd

#endif  // SMD_RISK_HPP

#include "smd/risk.hpp"

#include <cmath>
#include <limits>

#include "smd/errors.hpp"

namespace smd {

ExactRisk::ExactRisk(const FiniteDistribution& dist, LossKind loss, const BaseClass& basis)
    : loss_(loss), kind_(dist.kind()), design_(design_matrix(dist, basis)) {
  const bool regression_loss = loss == LossKind::squared;
  if (regression_loss != (kind_ == DataKind::regression))
    throw DomainError(std::string("risk: loss '") + std::string(to_string(loss)) +
                      "' does not match the " +
                      (kind_ == DataKind::regression ? "regression" : "classification") +
                      " distribution");
  const auto n = static_cast<Eigen::Index>(dist.size());
  y_.resize(n);
  p_.resize(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    y_(a) = dist[static_cast<std::size_t>(a)].y;
    p_(a) = dist[static_cast<std::size_t>(a)].p;
  }
}

double ExactRisk::value(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd f = design_ * theta;
  if (kind_ == DataKind::regression) return p_.dot((y_ - f).array().square().matrix());
  double acc = 0.0;
  for (Eigen::Index a = 0; a < f.size(); ++a) acc += p_(a) * loss_value(loss_, y_(a) * f(a));
  return acc;
}

Eigen::VectorXd ExactRisk::gradient(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd f = design_ * theta;
  Eigen::VectorXd weights(f.size());
  if (kind_ == DataKind::regression) {
    weights = 2.0 * p_.cwiseProduct(f - y_);
  } else {
    for (Eigen::Index a = 0; a < f.size(); ++a)
      weights(a) = p_(a) * loss_derivative(loss_, y_(a) * f(a)) * y_(a);
  }
  return design_.transpose() * weights;
}

double ExactRisk::misclassification(const Eigen::VectorXd& theta) const {
  if (kind_ != DataKind::classification)
    throw DomainError("misclassification: requires a classification distribution");
  const Eigen::VectorXd f = design_ * theta;
  double acc = 0.0;
  for (Eigen::Index a = 0; a < f.size(); ++a) {
    const double g = f(a) > 0.0 ? 1.0 : -1.0;
    if (g != y_(a)) acc += p_(a);
  }
  return acc;
}

double exact_phi_risk(const Weights& theta, const FiniteDistribution& dist, LossKind loss,
                      const BaseClass& basis) {
  return ExactRisk(dist, loss, basis).value(theta);
}

Eigen::VectorXd exact_gradient(const Weights& theta, const FiniteDistribution& dist,
                               LossKind loss, const BaseClass& basis) {
  return ExactRisk(dist, loss, basis).gradient(theta);
}

double misclassification(const Weights& theta, const FiniteDistribution& dist,
                         const BaseClass& basis) {
  return ExactRisk(dist, LossKind::hinge, basis).misclassification(theta.values());
}

double first_order_gap(const Weights& theta, const Eigen::VectorXd& grad) {
  return theta.values().dot(grad) - theta.mass() * grad.minCoeff();
}

namespace {

// Exact hinge minimizer: min Σ p_a s_a  s.t.  s_a ≥ 1 − y_a H_aᵀθ, s ≥ 0,
// θ ≥ 0, Σθ = λ. Variables [θ | s | r] with r the surplus of each margin row.
Eigen::VectorXd hinge_linear_program(const ExactRisk& risk, double lambda, long& pivots) {
  const Eigen::Index m = risk.dim();
  const Eigen::Index n = risk.design().rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, m + 2 * n);
  Eigen::VectorXd b(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.row(i).head(m) = risk.responses()(i) * risk.design().row(i);
    a(i, m + i) = 1.0;
    a(i, m + n + i) = -1.0;
    b(i) = 1.0;
  }
  a.row(n).head(m).setOnes();
  b(n) = lambda;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m + 2 * n);
  c.segment(m, n) = risk.probabilities();
  const detail::LinearProgramSolution sol = detail::solve_linear_program(a, b, c);
  pivots = sol.pivots;
  return sol.x.head(m);
}

struct Candidate {
  Eigen::VectorXd theta;
  double value;
};

// Accelerated entropic mirror descent (similar-triangles form with a KL
// prox step), backtracking on the smoothness constant and restarting the
// momentum whenever the objective increases.
Candidate accelerated_entropic(const ExactRisk& risk, double lambda, double tol, long max_iter,
                               long& iterations, double& gap_out) {
  const Eigen::Index m = risk.dim();
  auto entropic_step = [&](const Eigen::VectorXd& center, const Eigen::VectorXd& g,
                           double step) -> Eigen::VectorXd {
    const Eigen::ArrayXd c = center.array();
    const Eigen::VectorXd logits =
        (c > 0.0)
            .select(c.log() - step * g.array(), -std::numeric_limits<double>::infinity())
            .matrix();
    return softmax(logits, lambda);
  };
  auto kl = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j)
      if (a(j) > 0.0) acc += a(j) * std::log(a(j) / b(j)) - a(j) + b(j);
    return acc;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Constant(m, lambda / static_cast<double>(m));
  Eigen::VectorXd z = x;
  double fx = risk.value(x);
  double smooth = 1e-3;
  double momentum = 1.0;
  for (long k = 0; k < max_iter; ++k) {
    iterations = k;
    const Eigen::VectorXd gx = risk.gradient(x);
    const double gap = x.dot(gx) - lambda * gx.minCoeff();
    gap_out = gap;
    if (gap < tol) return {x, fx};

    Eigen::VectorXd x_next, z_next;
    double f_next = 0.0;
    for (;;) {
      const Eigen::VectorXd y = (1.0 - momentum) * x + momentum * z;
      const Eigen::VectorXd gy = risk.gradient(y);
      const double fy = risk.value(y);
      z_next = entropic_step(z, gy, 1.0 / (momentum * smooth));
      x_next = (1.0 - momentum) * x + momentum * z_next;
      f_next = risk.value(x_next);
      const double model =
          fy + gy.dot(x_next - y) + momentum * momentum * smooth * kl(z_next, z);
      if (f_next <= model + 1e-14 * (1.0 + std::abs(fy))) break;
      smooth *= 2.0;
      if (!std::isfinite(smooth)) throw NumericalError("batch_minimizer: step size collapsed");
    }
    if (f_next > fx) {
      momentum = 1.0;
      z = x;
      continue;
    }
    x = std::move(x_next);
    z = std::move(z_next);
    fx = f_next;
    const double m2 = momentum * momentum;
    momentum = 0.5 * (std::sqrt(m2 * m2 + 4.0 * m2) - m2);
  }
  throw NumericalError("batch_minimizer: first-order gap " + std::to_string(gap_out) +
                       " above tolerance after " + std::to_string(max_iter) + " iterations");
}

Candidate grid_search(const ExactRisk& risk, double lambda) {
  const Eigen::Index m = risk.dim();
  constexpr int kSteps = 1000;
  const double h = lambda / kSteps;
  Candidate best{Eigen::VectorXd::Constant(m, lambda / static_cast<double>(m)), 0.0};
  best.value = risk.value(best.theta);
  Eigen::VectorXd theta(m);
  auto consider = [&]() {
    const double v = risk.value(theta);
    if (v < best.value) best = {theta, v};
  };
  if (m == 2) {
    for (int i = 0; i <= kSteps; ++i) {
      theta << i * h, (kSteps - i) * h;
      consider();
    }
  } else {
    for (int i = 0; i <= kSteps; ++i)
      for (int j = 0; i + j <= kSteps; ++j) {
        theta << i * h, j * h, (kSteps - i - j) * h;
        consider();
      }
  }
  return best;
}

}  // namespace

BatchOptimum batch_minimizer(const FiniteDistribution& dist, LossKind loss, const BaseClass& basis,
                             double lambda, double tol, long max_iter) {
  if (!(lambda > 0.0)) throw DomainError("batch_minimizer: lambda must be positive");
  if (!(tol > 0.0)) throw DomainError("batch_minimizer: tol must be positive");
  const ExactRisk risk(dist, loss, basis);

  Candidate best;
  long iterations = 0;
  std::string method;
  if (loss == LossKind::hinge) {
    Eigen::VectorXd theta = hinge_linear_program(risk, lambda, iterations);
    best = {Weights(theta, lambda, Renormalize::yes).values(), 0.0};
    best.value = risk.value(best.theta);
    method = "linear-program";
  } else {
    double gap = 0.0;
    best = accelerated_entropic(risk, lambda, tol, max_iter, iterations, gap);
    method = "entropic-descent";
  }
  if (risk.dim() <= 3) {
    Candidate grid = grid_search(risk, lambda);
    if (grid.value < best.value) {
      best = std::move(grid);
      method += "+grid";
    }
  }
  Weights theta(best.theta, lambda, Renormalize::yes);
  const double gap = first_order_gap(theta, risk.gradient(theta));
  return {std::move(theta), best.value, gap, iterations, method};
}

}  // namespace smd

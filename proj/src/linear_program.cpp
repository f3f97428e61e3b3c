#include <cmath>
#include <string>
#include <vector>

#include "smd/errors.hpp"
#include "smd/risk.hpp"

namespace smd::detail {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kDegenerateBeforeBland = 50;

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : rows_(a.rows()), vars_(a.cols()), t_(a.rows() + 1, a.cols() + a.rows() + 1),
        basis_(static_cast<std::size_t>(a.rows())) {
    t_.setZero();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(vars_) = sign * a.row(i);
      t_(i, vars_ + i) = 1.0;
      t_(i, rhs()) = sign * b(i);
      basis_[static_cast<std::size_t>(i)] = vars_ + i;
    }
  }

  Eigen::Index rhs() const { return t_.cols() - 1; }
  Eigen::Index obj() const { return rows_; }

  void set_objective(const Eigen::VectorXd& cost) {
    t_.row(obj()).setZero();
    t_.row(obj()).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index bi = basis_[static_cast<std::size_t>(i)];
      const double cb = bi < cost.size() ? cost(bi) : 0.0;
      if (cb != 0.0) t_.row(obj()) -= cb * t_.row(i);
    }
  }

  // Runs simplex pivots over columns [0, allowed). Returns pivots taken.
  long optimize(Eigen::Index allowed, long& budget) {
    long pivots = 0;
    int degenerate = 0;
    for (;;) {
      Eigen::Index enter = -1;
      if (degenerate < kDegenerateBeforeBland) {
        double best = -kPivotEps;
        for (Eigen::Index j = 0; j < allowed; ++j)
          if (t_(obj(), j) < best) best = t_(obj(), j), enter = j;
      } else {
        for (Eigen::Index j = 0; j < allowed && enter < 0; ++j)
          if (t_(obj(), j) < -kPivotEps) enter = j;
      }
      if (enter < 0) return pivots;

      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double coef = t_(i, enter);
        if (coef <= kPivotEps) continue;
        const double ratio = t_(i, rhs()) / coef;
        if (leave < 0 || ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw NumericalError("linear program: objective unbounded below");
      degenerate = best_ratio <= 1e-14 ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++pivots;
      if (--budget < 0) throw NumericalError("linear program: pivot limit reached");
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Pivots remaining artificial variables out of the basis where possible.
  void evict_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < vars_) continue;
      for (Eigen::Index j = 0; j < vars_; ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double objective_value() const { return -t_(obj(), rhs()); }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(vars_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index bi = basis_[static_cast<std::size_t>(i)];
      if (bi < vars_) x(bi) = t_(i, rhs());
    }
    return x;
  }

  Eigen::Index vars() const { return vars_; }

 private:
  Eigen::Index rows_;
  Eigen::Index vars_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LinearProgramSolution solve_linear_program(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                           const Eigen::VectorXd& c) {
  if (a.rows() != b.size() || a.cols() != c.size())
    throw DomainError("linear program: inconsistent dimensions");
  Tableau tab(a, b);
  long budget = 50 * (a.rows() + a.cols()) + 1000;

  // Phase I: minimize the sum of artificials.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(a.cols() + a.rows());
  phase1.tail(a.rows()).setOnes();
  tab.set_objective(phase1);
  long pivots = tab.optimize(a.cols() + a.rows(), budget);
  const double infeasibility = tab.objective_value();
  if (infeasibility > 1e-9 * (1.0 + b.lpNorm<1>()))
    throw NumericalError("linear program: infeasible (phase I residual " +
                         std::to_string(infeasibility) + ")");
  tab.evict_artificials();

  // Phase II over the original columns only.
  tab.set_objective(c);
  pivots += tab.optimize(a.cols(), budget);
  Eigen::VectorXd x = tab.solution();
  return {x, c.dot(x), pivots};
}

}  // namespace smd::detail

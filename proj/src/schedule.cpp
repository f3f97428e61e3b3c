#include "smd/schedule.hpp"

#include <cmath>
#include <string>

#include "smd/errors.hpp"

namespace smd {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string("schedule: ") + name + " must be positive and finite");
}

}  // namespace

Schedule Schedule::anytime(double beta0) {
  require_positive(beta0, "beta0");
  Schedule s;
  s.kind_ = ScheduleKind::anytime;
  s.beta0_ = beta0;
  return s;
}

Schedule Schedule::fixed_horizon(double gamma, double beta) {
  require_positive(gamma, "gamma");
  require_positive(beta, "beta");
  Schedule s;
  s.kind_ = ScheduleKind::fixed_horizon;
  s.gamma_const_ = gamma;
  s.beta_const_ = beta;
  s.beta0_ = beta;
  return s;
}

Schedule Schedule::custom(Sequence gamma, Sequence beta) {
  if (!gamma || !beta) throw DomainError("schedule: custom sequences must be callable");
  Schedule s;
  s.kind_ = ScheduleKind::custom;
  s.gamma_fn_ = std::move(gamma);
  s.beta_fn_ = std::move(beta);
  s.beta0_ = s.beta_fn_(0);
  require_positive(s.beta0_, "beta(0)");
  return s;
}

double Schedule::unit_gamma(long i) const {
  if (i < 1) throw DomainError("schedule: gamma is defined for i >= 1");
  switch (kind_) {
    case ScheduleKind::anytime:
      return 1.0;
    case ScheduleKind::fixed_horizon:
      return gamma_const_;
    case ScheduleKind::custom: {
      const double g = gamma_fn_(i);
      require_positive(g, "gamma(i)");
      return g;
    }
  }
  return 1.0;
}

double Schedule::unit_beta(long i) const {
  if (i < 0) throw DomainError("schedule: beta is defined for i >= 0");
  switch (kind_) {
    case ScheduleKind::anytime:
      return i == 0 ? beta0_ : beta0_ * std::sqrt(static_cast<double>(i) + 1.0);
    case ScheduleKind::fixed_horizon:
      return beta_const_;
    case ScheduleKind::custom: {
      const double b = i == 0 ? beta0_ : beta_fn_(i);
      require_positive(b, "beta(i)");
      return b;
    }
  }
  return beta0_;
}

Schedule Schedule::scaled(double c) const {
  require_positive(c, "scale factor");
  Schedule s = *this;
  s.scale_ *= c;
  return s;
}

Schedule make_schedule_anytime(double lipschitz, long dim) {
  require_positive(lipschitz, "L");
  if (dim < 2) throw DomainError("schedule: M must be >= 2 (ln M must be positive)");
  return Schedule::anytime(lipschitz / std::sqrt(std::log(static_cast<double>(dim))));
}

Schedule make_schedule_anytime(double lipschitz, double alpha, double vbar) {
  require_positive(lipschitz, "L");
  require_positive(alpha, "alpha");
  require_positive(vbar, "Vbar");
  return Schedule::anytime(lipschitz / std::sqrt(alpha * vbar));
}

Schedule make_schedule_fixed_horizon(double lipschitz, double alpha, double vstar, long horizon) {
  require_positive(lipschitz, "L");
  require_positive(alpha, "alpha");
  require_positive(vstar, "Vstar");
  if (horizon < 1) throw DomainError("schedule: horizon t must be >= 1");
  return Schedule::fixed_horizon(1.0 / std::sqrt(static_cast<double>(horizon)),
                                 lipschitz / std::sqrt(2.0 * alpha * vstar));
}

}  // namespace smd

#ifndef SMD_SCHEDULE_HPP
#define SMD_SCHEDULE_HPP

#include <functional>

namespace smd {

enum class ScheduleKind { anytime, fixed_horizon, custom };

/// Step sizes γ_i (i ≥ 1) and temperatures β_i (i ≥ 0) as closed-form
/// functions of the 1-based iteration index.
///
/// Both sequences are stored as a common positive scale times unit
/// sequences: γ_i = scale·g_i, β_i = scale·b_i. The engine works in unit
/// terms wherever only the ratio matters, which makes a joint rescaling of
/// (γ, β) exactly invisible to the entropic iterates.
class Schedule {
 public:
  using Sequence = std::function<double(long)>;

  /// γ_i = 1, β_i = beta0·√(i+1), β_0 = beta0.
  static Schedule anytime(double beta0);
  /// γ_i ≡ gamma, β_i ≡ beta (including β_0).
  static Schedule fixed_horizon(double gamma, double beta);
  /// User sequences. beta(0) must be defined; monotonicity is checked by
  /// the engine as iterations proceed.
  static Schedule custom(Sequence gamma, Sequence beta);

  ScheduleKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }

  double unit_gamma(long i) const;
  double unit_beta(long i) const;
  double gamma(long i) const { return scale_ * unit_gamma(i); }
  double beta(long i) const { return scale_ * unit_beta(i); }
  double beta0() const { return beta(0); }

  /// Same schedule with γ and β both multiplied by c > 0.
  Schedule scaled(double c) const;

 private:
  Schedule() = default;

  ScheduleKind kind_ = ScheduleKind::anytime;
  double scale_ = 1.0;
  double beta0_ = 1.0;
  double gamma_const_ = 1.0;
  double beta_const_ = 1.0;
  Sequence gamma_fn_;
  Sequence beta_fn_;
};

/// Tuned entropic schedule: γ ≡ 1, β_0 = L/√(ln M).
Schedule make_schedule_anytime(double lipschitz, long dim);

/// Anytime schedule for a general proxy: β_0 = L/√(α V̄).
Schedule make_schedule_anytime(double lipschitz, double alpha, double vbar);

/// Known-horizon schedule: γ ≡ 1/√t, β ≡ L/√(2 α V*).
Schedule make_schedule_fixed_horizon(double lipschitz, double alpha, double vstar, long horizon);

}  // namespace smd

#endif  // SMD_SCHEDULE_HPP

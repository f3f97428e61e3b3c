#ifndef SMD_BOUNDS_HPP
#define SMD_BOUNDS_HPP

#include <Eigen/Dense>

#include "smd/proxy.hpp"
#include "smd/schedule.hpp"

namespace smd {

enum class BoundKind { anytime_thm1, fixed_horizon, general_thm2 };

/// Upper bounds on E A(θ̂_t) − min A after t iterations.
///   anytime_thm1:  2λL√(ln M)·√(t+1)/t
///   fixed_horizon: λL√(2 ln M / t)
///   general_thm2:  2L√(V̄/α)·√(t+1)/t
/// M is only used by the two entropic kinds; α and V̄ only by general_thm2.
double theoretical_bound(BoundKind kind, long t, Eigen::Index dim, double lambda, double lipschitz,
                         double alpha = 0.0, double vbar = 0.0);

/// Known-horizon bound for a general proxy, L√(2V*/(αt)).
double fixed_horizon_general_bound(long t, double lipschitz, double alpha, double vstar);

/// Non-asymptotic bound for an arbitrary schedule:
///   (1/Σγ_i)·(β_t V(θ*_A) − β_0 V(θ*) + L² Σ γ_i²/(2αβ_{i−1})),
/// where `v_at_optimum` is V(θ*_A) (or any upper bound on it).
double averaged_bound(const ProxyFunction& proxy, const Schedule& schedule, double lipschitz,
                      long t, double v_at_optimum);

}  // namespace smd

#endif  // SMD_BOUNDS_HPP

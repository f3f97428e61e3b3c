#ifndef SMD_PROJECTION_HPP
#define SMD_PROJECTION_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "smd/errors.hpp"

namespace smd {

/// Euclidean projection of v onto {θ ≥ 0, Σθ = mass}.
///
/// Sort-based threshold search: θ_j = max(0, v_j − τ) with τ chosen so the
/// result has the requested mass.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> project_to_simplex(
    const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar mass) {
  using Scalar = typename Derived::Scalar;
  if (!(mass > Scalar(0))) throw DomainError("project_to_simplex: mass must be positive");
  if (!v.allFinite()) throw DomainError("project_to_simplex: non-finite input");
  const Eigen::Index n = v.size();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dense = v;
  std::vector<Scalar> sorted(dense.data(), dense.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

  Scalar cumulative(0);
  Scalar tau(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const Scalar candidate = (cumulative - mass) / Scalar(k + 1);
    if (k + 1 == n || sorted[static_cast<std::size_t>(k + 1)] <= candidate) {
      tau = candidate;
      break;
    }
  }
  return (dense.array() - tau).cwiseMax(Scalar(0)).matrix();
}

}  // namespace smd

#endif  // SMD_PROJECTION_HPP

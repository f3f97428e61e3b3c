#ifndef SMD_DATA_HPP
#define SMD_DATA_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smd/simplex.hpp"

namespace smd {

/// H(x) = (h_1(x), …, h_M(x)) with every h_j valued in [−K, K].
class BaseClass {
 public:
  using Function = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  BaseClass(Eigen::Index dim, double bound_k, Function fn);

  Eigen::Index dim() const noexcept { return dim_; }
  double bound() const noexcept { return bound_; }

  /// Evaluates H(x); throws DomainError if the output leaves [−K, K]^M.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;

 private:
  Eigen::Index dim_;
  double bound_;
  Function fn_;
};

/// Decision stumps h(x) = sign(x_d − τ) ∈ {−1, +1} (strict: x_d = τ gives −1),
/// one per (coordinate, threshold). With `symmetric`, each stump is followed
/// by its negation.
BaseClass stump_basis(Eigen::Index input_dim, const std::vector<std::vector<double>>& thresholds,
                      bool symmetric);

enum class DataKind { classification, regression };

struct Atom {
  Eigen::VectorXd x;
  double y;
  double p;
};

/// A finite-support law of (X, Y): atoms with positive probabilities summing
/// to one. Classification labels are ±1.
class FiniteDistribution {
 public:
  FiniteDistribution(DataKind kind, std::vector<Atom> atoms);

  DataKind kind() const noexcept { return kind_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  /// max |y| over the support.
  double max_abs_response() const;

 private:
  DataKind kind_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Source of observations (X_i, Y_i).
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual const Atom& next() = 0;
  virtual long position() const = 0;
};

/// I.i.d. draws from a FiniteDistribution using mt19937_64 and inverse-CDF
/// lookup. Equal seeds replay identical sequences on every platform.
class SampleStream final : public SampleSource {
 public:
  SampleStream(std::shared_ptr<const FiniteDistribution> dist, std::uint64_t seed);

  std::size_t draw_index();
  const Atom& next() override { return (*dist_)[draw_index()]; }
  long position() const override { return position_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::shared_ptr<const FiniteDistribution> dist_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  long position_ = 0;
};

/// Replays the atoms of a distribution once, in file order. Throws
/// DataExhausted past the last atom.
class SequentialSource final : public SampleSource {
 public:
  explicit SequentialSource(std::shared_ptr<const FiniteDistribution> dist);
  const Atom& next() override;
  long position() const override { return position_; }

 private:
  std::shared_ptr<const FiniteDistribution> dist_;
  long position_ = 0;
};

struct CsvOptions {
  DataKind kind = DataKind::classification;
  bool header = false;
};

/// Reads "label,feature_1,…,feature_d" rows into an empirical law with
/// uniform weights. Duplicate rows stay separate atoms.
FiniteDistribution load_dataset(const std::string& path, const CsvOptions& options = {});

/// +1 iff θᵀH(x) > 0.
int decision_rule(const Weights& theta, const BaseClass& basis, const Eigen::VectorXd& x);

/// Random atoms x ~ U[−1,1]^d, labels from a fixed linear rule with flip
/// probability `noise`, probabilities ∝ U[0.5, 1.5).
FiniteDistribution synthetic_classification(std::size_t atoms, Eigen::Index input_dim,
                                            std::uint64_t seed, double noise);

/// Random atoms x ~ U[−1,1]^d, y = tanh(x_1 − x_2/2) + noise·U[−1,1),
/// clipped to [−1, 1].
FiniteDistribution synthetic_regression(std::size_t atoms, Eigen::Index input_dim,
                                        std::uint64_t seed, double noise);

/// Per-coordinate thresholds at the interior quantiles k/(n+1) of the
/// atoms' feature values.
std::vector<std::vector<double>> quantile_thresholds(const FiniteDistribution& dist,
                                                     std::size_t per_dim);

/// Matrix whose rows are H(x_a)ᵀ for the atoms of `dist`.
Eigen::MatrixXd design_matrix(const FiniteDistribution& dist, const BaseClass& basis);

}  // namespace smd

#endif  // SMD_DATA_HPP

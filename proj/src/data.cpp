#include "smd/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "smd/errors.hpp"

namespace smd {

BaseClass::BaseClass(Eigen::Index dim, double bound_k, Function fn)
    : dim_(dim), bound_(bound_k), fn_(std::move(fn)) {
  if (dim_ < 2) throw DomainError("BaseClass: M must be >= 2");
  if (!(bound_ > 0.0) || !std::isfinite(bound_)) throw DomainError("BaseClass: K must be positive");
  if (!fn_) throw DomainError("BaseClass: empty function");
}

Eigen::VectorXd BaseClass::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd h = fn_(x);
  if (h.size() != dim_) throw DomainError("BaseClass: output length differs from M");
  if (!h.allFinite() || h.cwiseAbs().maxCoeff() > bound_)
    throw DomainError("BaseClass: output outside [-K, K]");
  return h;
}

BaseClass stump_basis(Eigen::Index input_dim, const std::vector<std::vector<double>>& thresholds,
                      bool symmetric) {
  if (input_dim < 1) throw DomainError("stump_basis: input dimension must be >= 1");
  if (static_cast<Eigen::Index>(thresholds.size()) != input_dim)
    throw DomainError("stump_basis: need one threshold list per coordinate");
  struct Stump {
    Eigen::Index coord;
    double tau;
    double sign;
  };
  std::vector<Stump> stumps;
  for (Eigen::Index d = 0; d < input_dim; ++d) {
    for (double tau : thresholds[static_cast<std::size_t>(d)]) {
      if (!std::isfinite(tau)) throw DomainError("stump_basis: non-finite threshold");
      stumps.push_back({d, tau, 1.0});
      if (symmetric) stumps.push_back({d, tau, -1.0});
    }
  }
  if (stumps.empty()) throw DomainError("stump_basis: at least one threshold is required");
  const auto dim = static_cast<Eigen::Index>(stumps.size());
  return BaseClass(dim, 1.0, [stumps = std::move(stumps), input_dim](const Eigen::VectorXd& x) {
    if (x.size() != input_dim) throw DomainError("stump_basis: feature dimension mismatch");
    Eigen::VectorXd h(static_cast<Eigen::Index>(stumps.size()));
    for (std::size_t j = 0; j < stumps.size(); ++j) {
      const Stump& s = stumps[j];
      h(static_cast<Eigen::Index>(j)) = s.sign * (x(s.coord) > s.tau ? 1.0 : -1.0);
    }
    return h;
  });
}

FiniteDistribution::FiniteDistribution(DataKind kind, std::vector<Atom> atoms)
    : kind_(kind), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("FiniteDistribution: no atoms");
  const Eigen::Index xdim = atoms_.front().x.size();
  double total = 0.0;
  cumulative_.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    if (a.x.size() != xdim) throw DomainError("FiniteDistribution: inconsistent feature dimension");
    if (!a.x.allFinite() || !std::isfinite(a.y))
      throw DomainError("FiniteDistribution: non-finite atom");
    if (!(a.p > 0.0) || !std::isfinite(a.p))
      throw DomainError("FiniteDistribution: probabilities must be positive");
    if (kind_ == DataKind::classification && a.y != 1.0 && a.y != -1.0)
      throw DomainError("FiniteDistribution: classification labels must be +1 or -1");
    total += a.p;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("FiniteDistribution: probabilities sum to " + std::to_string(total));
}

double FiniteDistribution::max_abs_response() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m = std::max(m, std::abs(a.y));
  return m;
}

SampleStream::SampleStream(std::shared_ptr<const FiniteDistribution> dist, std::uint64_t seed)
    : dist_(std::move(dist)), seed_(seed), rng_(seed) {
  if (!dist_) throw DomainError("SampleStream: null distribution");
}

std::size_t SampleStream::draw_index() {
  ++position_;
  const std::vector<double>& cdf = dist_->cumulative();
  // Scale by the stored total so rounding in Σp never leaves a gap at the end.
  const double u = unit_uniform(rng_) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf.begin());
  return std::min(idx, cdf.size() - 1);
}

SequentialSource::SequentialSource(std::shared_ptr<const FiniteDistribution> dist)
    : dist_(std::move(dist)) {
  if (!dist_) throw DomainError("SequentialSource: null distribution");
}

const Atom& SequentialSource::next() {
  if (static_cast<std::size_t>(position_) >= dist_->size())
    throw DataExhausted("data source exhausted after " + std::to_string(position_) + " samples",
                        position_ + 1);
  return (*dist_)[static_cast<std::size_t>(position_++)];
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value))
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  return value;
}

}  // namespace

FiniteDistribution load_dataset(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open dataset '" + path + "'");
  std::vector<std::pair<double, std::vector<double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (options.header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(parse_number(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() < 2) throw ParseError("row needs a label and at least one feature", line_no);
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(fields.size()),
                       line_no);
    const double label = fields.front();
    if (options.kind == DataKind::classification && label != 1.0 && label != -1.0)
      throw DomainError("label " + std::to_string(label) + " on line " + std::to_string(line_no) +
                        " is not -1 or +1");
    fields.erase(fields.begin());
    rows.emplace_back(label, std::move(fields));
  }
  if (rows.empty()) throw ParseError("dataset has no data rows", line_no);
  const double p = 1.0 / static_cast<double>(rows.size());
  std::vector<Atom> atoms;
  atoms.reserve(rows.size());
  for (auto& [label, feats] : rows) {
    atoms.push_back({Eigen::Map<const Eigen::VectorXd>(feats.data(),
                                                       static_cast<Eigen::Index>(feats.size())),
                     label, p});
  }
  // Uniform weights may drift from 1 by rounding; normalize once.
  double total = 0.0;
  for (const Atom& a : atoms) total += a.p;
  for (Atom& a : atoms) a.p /= total;
  return FiniteDistribution(options.kind, std::move(atoms));
}

int decision_rule(const Weights& theta, const BaseClass& basis, const Eigen::VectorXd& x) {
  return theta.values().dot(basis.evaluate(x)) > 0.0 ? 1 : -1;
}

namespace {

std::vector<Atom> random_atoms(std::size_t n, Eigen::Index input_dim, std::mt19937_64& rng) {
  if (n == 0) throw DomainError("synthetic distribution: need at least one atom");
  if (input_dim < 1) throw DomainError("synthetic distribution: input dimension must be >= 1");
  std::vector<Atom> atoms(n);
  double total = 0.0;
  for (Atom& a : atoms) {
    a.x.resize(input_dim);
    for (Eigen::Index d = 0; d < input_dim; ++d) a.x(d) = 2.0 * unit_uniform(rng) - 1.0;
    a.p = 0.5 + unit_uniform(rng);
    total += a.p;
  }
  for (Atom& a : atoms) a.p /= total;
  return atoms;
}

}  // namespace

FiniteDistribution synthetic_classification(std::size_t atoms, Eigen::Index input_dim,
                                            std::uint64_t seed, double noise) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw DomainError("synthetic: noise must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Atom> out = random_atoms(atoms, input_dim, rng);
  for (Atom& a : out) {
    double score = 0.1;
    double w = 1.0;
    for (Eigen::Index d = 0; d < input_dim; ++d, w *= -0.5) score += w * a.x(d);
    a.y = score > 0.0 ? 1.0 : -1.0;
    if (unit_uniform(rng) < noise) a.y = -a.y;
  }
  return FiniteDistribution(DataKind::classification, std::move(out));
}

FiniteDistribution synthetic_regression(std::size_t atoms, Eigen::Index input_dim,
                                        std::uint64_t seed, double noise) {
  if (!(noise >= 0.0)) throw DomainError("synthetic: noise must be nonnegative");
  std::mt19937_64 rng(seed);
  std::vector<Atom> out = random_atoms(atoms, input_dim, rng);
  for (Atom& a : out) {
    const double second = input_dim > 1 ? a.x(1) : 0.0;
    const double y = std::tanh(a.x(0) - 0.5 * second) + noise * (2.0 * unit_uniform(rng) - 1.0);
    a.y = std::clamp(y, -1.0, 1.0);
  }
  return FiniteDistribution(DataKind::regression, std::move(out));
}

std::vector<std::vector<double>> quantile_thresholds(const FiniteDistribution& dist,
                                                     std::size_t per_dim) {
  if (per_dim == 0) throw DomainError("quantile_thresholds: need at least one threshold");
  const Eigen::Index input_dim = dist[0].x.size();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(input_dim));
  for (Eigen::Index d = 0; d < input_dim; ++d) {
    std::vector<double> values;
    values.reserve(dist.size());
    for (const Atom& a : dist.atoms()) values.push_back(a.x(d));
    std::sort(values.begin(), values.end());
    for (std::size_t k = 1; k <= per_dim; ++k) {
      const double pos = static_cast<double>(k) / static_cast<double>(per_dim + 1) *
                         static_cast<double>(values.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const auto hi = std::min(lo + 1, values.size() - 1);
      const double frac = pos - static_cast<double>(lo);
      out[static_cast<std::size_t>(d)].push_back(values[lo] + frac * (values[hi] - values[lo]));
    }
  }
  return out;
}

Eigen::MatrixXd design_matrix(const FiniteDistribution& dist, const BaseClass& basis) {
  Eigen::MatrixXd h(static_cast<Eigen::Index>(dist.size()), basis.dim());
  for (std::size_t a = 0; a < dist.size(); ++a)
    h.row(static_cast<Eigen::Index>(a)) = basis.evaluate(dist[a].x).transpose();
  return h;
}

}  // namespace smd

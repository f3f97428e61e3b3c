#include "smd/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smd/errors.hpp"

namespace smd {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object", 0);
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ParseError("unknown key '" + where + it.key() + "'", 0);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError("wrong type for '" + where + key + "'", 0);
  }
}

DistributionSpec parse_distribution(const json& j) {
  reject_unknown(j, {"type", "atoms", "input_dim", "seed", "noise", "path", "header"},
                 "distribution.");
  DistributionSpec d;
  read(j, "type", d.type, "distribution.");
  read(j, "atoms", d.atoms, "distribution.");
  read(j, "input_dim", d.input_dim, "distribution.");
  read(j, "seed", d.seed, "distribution.");
  read(j, "noise", d.noise, "distribution.");
  read(j, "path", d.path, "distribution.");
  read(j, "header", d.header, "distribution.");
  return d;
}

BasisSpec parse_basis(const json& j) {
  reject_unknown(j, {"type", "thresholds", "quantiles_per_dim", "symmetric"}, "basis.");
  BasisSpec b;
  std::string type = "stumps";
  read(j, "type", type, "basis.");
  if (type != "stumps") throw DomainError("config: basis.type must be 'stumps'");
  read(j, "thresholds", b.thresholds, "basis.");
  read(j, "quantiles_per_dim", b.quantiles_per_dim, "basis.");
  read(j, "symmetric", b.symmetric, "basis.");
  return b;
}

}  // namespace

ScheduleKind schedule_from_name(const std::string& name) {
  if (name == "anytime") return ScheduleKind::anytime;
  if (name == "fixed" || name == "fixed-horizon") return ScheduleKind::fixed_horizon;
  throw DomainError("unknown schedule '" + name + "' (expected anytime or fixed)");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  reject_unknown(j,
                 {"distribution", "basis", "loss", "lambda", "proxy", "schedule", "algorithm",
                  "t_grid", "replicates", "seed", "output", "threads", "y_max"},
                 "");
  ExperimentConfig c;
  if (j.contains("distribution")) c.distribution = parse_distribution(j.at("distribution"));
  if (j.contains("basis")) c.basis = parse_basis(j.at("basis"));
  std::string loss = "hinge", schedule = "anytime", algorithm = "smd";
  read(j, "loss", loss, "");
  read(j, "schedule", schedule, "");
  read(j, "algorithm", algorithm, "");
  c.loss = loss_from_name(loss);
  c.schedule = schedule_from_name(schedule);
  c.algorithm = algorithm_from_name(algorithm);
  read(j, "lambda", c.lambda, "");
  read(j, "proxy", c.proxy, "");
  read(j, "t_grid", c.t_grid, "");
  read(j, "replicates", c.replicates, "");
  read(j, "seed", c.seed, "");
  read(j, "output", c.output, "");
  read(j, "threads", c.threads, "");
  read(j, "y_max", c.y_max, "");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace smd

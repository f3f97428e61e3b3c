#ifndef SMD_CONFIG_HPP
#define SMD_CONFIG_HPP

#include <string>

#include "smd/experiment.hpp"

namespace smd {

/// Parses an ExperimentConfig from JSON text. Unknown keys and wrong types
/// raise ParseError; out-of-range values raise DomainError.
ExperimentConfig parse_config(const std::string& json_text);

/// Reads and parses a JSON file; FileError if it cannot be read.
ExperimentConfig load_config(const std::string& path);

ScheduleKind schedule_from_name(const std::string& name);

}  // namespace smd

#endif  // SMD_CONFIG_HPP

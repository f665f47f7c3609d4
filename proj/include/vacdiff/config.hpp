#pragma once

// Flat `key = value` configuration documents. Blank lines and text after `#`
// are ignored; every other line must set exactly one known key, once.

#include <string>
#include <string_view>
#include <vector>

#include "vacdiff/experiment.hpp"

namespace vacdiff {

/// Parses and validates a document; an empty one yields the defaults.
/// Errors carry the key and the 1-based line.
ExperimentConfig parse_config(std::string_view text);

/// Sets one key from its textual value. Does not validate the whole config.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   int line = 0);

/// Sets a numeric key; throws ConfigError for unknown or non-numeric keys.
void set_numeric(ExperimentConfig& config, std::string_view key, double value);
double get_numeric(const ExperimentConfig& config, std::string_view key);

/// Every recognised key, in document order.
const std::vector<std::string>& config_keys();

/// Resolved configuration as a parseable document. Optional lengths are
/// written with their defaults filled in; absent hidden-field keys are omitted.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace vacdiff

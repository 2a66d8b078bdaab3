#pragma once

#include <string>
#include <string_view>

#include "etmatch/pipeline.hpp"

namespace etmatch {

/// Flat run configuration. Every key of the `key = value` file maps to one
/// field; unknown keys and out-of-range values are rejected.
struct RunConfig {
  PipelineConfig pipeline;
  std::string taxonomy;    // optional resource paths
  std::string embeddings;
  bool strict = true;      // strict graph parsing
};

/// Parses `key = value` lines ('#' starts a comment). Throws
/// Error(validation) with the line number on unknown keys or bad values.
[[nodiscard]] RunConfig parse_run_config(std::string_view text, std::string_view source_name = "<memory>");
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// Applies one key/value pair; shared by the file parser and CLI overrides.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Checks cross-field ranges. Throws Error(validation).
void validate(const RunConfig& config);

/// Documented defaults, one `key = value` per line.
[[nodiscard]] std::string describe_defaults();

}  // namespace etmatch

// betaflow: key=value experiment configuration with strict validation.
#pragma once

#include "betaflow/types.hpp"

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

namespace betaflow {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_num = 0, std::string field_name = "")
      : std::runtime_error(msg), line(line_num), field(std::move(field_name)) {}
  int line = 0;           // 1-based; 0 when not tied to a line
  std::string field;      // offending key, when known
};

// Text that could not be read as config at all: malformed lines, duplicate
// keys, values that fail to scan as their type. Range violations on values
// that did scan stay plain ConfigErrors.
struct ConfigParseError : ConfigError {
  using ConfigError::ConfigError;
};

struct ExperimentConfig {
  int d = 2;
  Sector sector = Sector::hermitian;
  double p = 0.5;
  double gamma = 1.0;
  double n = 100.0;
  int m = 10;
  double T = 1.0;
  double dt = 1e-3;
  double delta = 0.01;
  double collision_tol = 1e-6;
  std::size_t paths = 1000;
  std::uint64_t seed = 1729;
  int threads = 0;  // 0: one worker per hardware thread
  std::string out_dir = "out";

  // Keys that appeared explicitly in the parsed text. Experiments use this to
  // tell a deliberate override from a filled-in default.
  std::set<std::string> provided;
  bool has(const std::string& key) const { return provided.count(key) != 0; }
};

// Grammar: one `key = value` per line; `#` starts a comment; blank lines are
// skipped. Keys are case-sensitive. Unknown keys, duplicate keys, and
// malformed lines are ConfigErrors carrying the line number; range violations
// are ConfigErrors naming the field.
ExperimentConfig parse_config(const std::string& text);

// One key=value assignment under the same parsing and validation rules; the
// key is marked as provided. Unlike the parser this may overwrite a key that
// was already set.
void set_config_field(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);

ExperimentConfig load_config_file(const std::string& path);

// The full configuration as config text, in canonical key order. Parsing it
// back yields the same configuration.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace betaflow

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sagin/domain.hpp"

namespace sagin {

// Malformed input (syntax, non-numeric values, unreadable file). Unknown keys are
// not errors here; they are collected in ScenarioConfig::unknown_keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key = value file with [section] headers; [model], [service] and [operator]
// may repeat. Missing sections fall back to make_default_config().
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

// Writes every section explicitly; parse_config(write_config(c)) reproduces c.
void write_config(const ScenarioConfig& cfg, std::ostream& out);
std::string config_to_string(const ScenarioConfig& cfg);

// 64-bit FNV-1a of the canonical text form.
std::uint64_t config_hash(const ScenarioConfig& cfg);

}  // namespace sagin

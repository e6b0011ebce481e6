// Line-oriented `key = value` configuration files: strict parsing with
// per-key errors and line numbers, unknown-key rejection, and a resolved
// echo listing every key after defaults are applied.
#pragma once

#include <string>
#include <vector>

#include "sgdtn/config.hpp"

namespace sgdtn {

struct ConfigError {
    int line = 0; // 0: file-level (e.g. a violated invariant)
    std::string key;
    std::string message;
};

struct ConfigParseResult {
    SimConfig config;
    std::vector<ConfigError> errors;
    bool ok() const { return errors.empty(); }
};

ConfigParseResult parse_config_text(const std::string& text);
ConfigParseResult load_config(const std::string& path);

// Every key with its effective value, `key = value` per line.
std::string render_config(const SimConfig& cfg);
void write_resolved_config(const std::string& path, const SimConfig& cfg);

std::string format_errors(const std::vector<ConfigError>& errors);

// All recognized keys, in render order (the config reference).
std::vector<std::string> config_keys();

} // namespace sgdtn

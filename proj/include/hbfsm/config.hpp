#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hbfsm/sim.hpp"

namespace hbfsm {

// Bad config content (unknown key, wrong type, invariant violation).
// The message names the offending key path. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable file and friends. CLI maps this to exit code 1.
struct FileError : std::runtime_error {
  explicit FileError(const std::string& msg) : std::runtime_error(msg) {}
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Re-checks every invariant; throws ConfigError naming the field.
void validate_config(const ExperimentConfig& cfg);

// Both sides of a comparison must spend the same bits per channel use.
void validate_comparison(const ExperimentConfig& a, const ExperimentConfig& b);

// Materialized config as a JSON object (the manifest echo).
std::string config_echo_json(const ExperimentConfig& cfg);

// Full run manifest. extras are (key, raw JSON value) pairs appended under
// "results" in order.
std::string manifest_text(const std::string& subcommand, const ExperimentConfig& cfg,
                          const std::vector<std::pair<std::string, std::string>>& extras);

// "a:b:c" (start:step:stop) or comma list -> grid; throws ConfigError.
std::vector<double> parse_snr_spec(const std::string& text);

}  // namespace hbfsm

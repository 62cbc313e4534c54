#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace hullsing::cli {

const std::vector<std::string>& command_names();

/// Every key a command accepts, with its default. --config and flags overlay these.
json default_config(const std::string& command);

/// Defaults ← file ← flags. Unknown keys are a UsageError.
json merge_config(const std::string& command, const json& file, const json& flags);

/// Runs a validated command and returns the exit code (0 ok, 1 verification failure).
int run_command(const std::string& command, const json& config);

int cmd_envelope(const json& config, const Stamp& stamp, const std::string& out);
int cmd_front(const json& config, const Stamp& stamp, const std::string& out);
int cmd_verify(const json& config, const Stamp& stamp, const std::string& out);
int cmd_classify(const json& config, const Stamp& stamp, const std::string& out);
int cmd_swallowtail(const json& config, const Stamp& stamp, const std::string& out);

}  // namespace hullsing::cli

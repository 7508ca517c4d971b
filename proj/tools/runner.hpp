#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>

namespace maxstable::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit status of a run.
enum ExitCode : int { kOk = 0, kValidationError = 1, kNumericError = 2 };

// 64-bit FNV-1a, rendered as 16 hex digits.
[[nodiscard]] std::string fnv1a_hex(const std::string& bytes);

// Executes one experiment described by a fully merged configuration. Writes
// artifacts under config["out"], a human summary to `out`, and returns the
// exit status. Exceptions propagate.
int run_config(const nlohmann::json& config, std::ostream& out);

// Command-line entry point: parses flags, merges them over --config, runs,
// and reports errors as JSON on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxstable::cli

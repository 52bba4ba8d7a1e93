#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mcast/config.hpp"

namespace mcast::cli {

struct RunCommand {
    std::string config_path;
    std::string out_dir;
};

struct SweepCommand {
    std::string config_path;
    std::vector<int> m_list;  // ascending, nonempty
    std::string out_dir;
    std::vector<GroupingScheme> groupings;
    std::vector<AllocatorKind> allocators;
};

struct ExactCommand {
    std::string instance_path;
};

struct Reduce3PCommand {
    std::string in_path;
    std::string out_path;
};

struct ReduceSatCommand {
    std::string in_path;
    std::string out_path;  // optional report
};

struct ValidateCommand {
    std::string config_path;
};

using Command = std::variant<RunCommand, SweepCommand, ExactCommand, Reduce3PCommand,
                             ReduceSatCommand, ValidateCommand>;

struct ParsedArgs {
    Command command;
    std::optional<std::uint64_t> seed_override;
};

/// Thrown for malformed command lines; exit_code is what main should return.
struct UsageError : std::runtime_error {
    int exit_code;
    UsageError(const std::string& message, int code)
        : std::runtime_error(message), exit_code(code) {}
};

ParsedArgs parse_args(const std::vector<std::string>& args);

/// Executes a parsed command; returns the process exit code.
int dispatch(const ParsedArgs& parsed);

}  // namespace mcast::cli

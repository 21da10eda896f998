#pragma once

#include <hitomezashi/geometry.hpp>
#include <hitomezashi/trace.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hitomezashi::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

struct CliConfig {
    std::string subcommand;
    std::string eps;
    std::string eta;
    std::array<std::int64_t, 4> window{0, 0, 0, 0}; // x0 y0 x1 y1
    bool window_given = false;
    std::int64_t budget = kDefaultBudget;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    std::int64_t size = 16;
    unsigned n_eps = 5;
    unsigned n_eta = 5;
    unsigned workers = 1;
    std::array<std::int64_t, 2> start{0, 0};
    std::string dir;
    std::string certificate;
    std::string output;
    std::string format; // empty: subcommand default
    int cell_size = 24;
    bool labels = false;
    std::size_t highlight = 0;
};

/// Parses argv-style arguments (without the program name). Returns the exit
/// code to use when parsing ends the run (help, usage error).
std::optional<int> parse_args(const std::vector<std::string>& args, CliConfig& config, std::ostream& out,
                              std::ostream& err);

/// Executes a parsed configuration. Exit codes: 0 success, 1 violation found,
/// 2 usage or input error.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hitomezashi::cli

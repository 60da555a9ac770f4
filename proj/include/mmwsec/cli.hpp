#pragma once

#include "mmwsec/montecarlo.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmwsec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInapplicable = 4;

struct RunConfig {
    std::string command;          // "figure" or "sweep"
    std::optional<int> figure_id;
    SweepSpec spec;
    std::string output;
    bool analytic = false;
    int verbosity = 0;
    unsigned threads = 0;
};

// Thrown by parse_args for --help; carries the help text.
struct HelpRequested {
    std::string text;
};

// Layers preset < config file < flags and validates the result. Throws
// UsageError for malformed input, ValidationError for broken invariants and
// HelpRequested for --help.
RunConfig parse_args(const std::vector<std::string>& args);

// Flat `key = value` text, '#' comments. Keys are the long flag names without
// leading dashes.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// Key/value echo of a config; valid input for --config.
std::string metadata_record(const RunConfig& cfg);

// Executes the run and writes <output> and <output>.meta (plus
// <output>.analytic.csv with --analytic). Returns a process exit status.
int run(const RunConfig& cfg, std::ostream& log);

// parse_args + run with diagnostics on err; the body of main().
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mmwsec::cli

#pragma once

// Subcommand implementations behind the `mbm` executable. They write to the
// given streams and return the process exit code, so tests drive them
// directly.

#include "mbm/properties.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mbm::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kValidation = 2,
    kDegenerate = 3,
    kSearchBudget = 4,
};

/// MBM_SEED, if set to an unsigned integer.
std::optional<std::uint64_t> seed_from_env();

struct RunOptions {
    std::string captable;
    std::size_t m_bar = 0;
    std::optional<std::uint64_t> seed;
    bool expected = false;  // both branches; implied when no seed is given
    std::string format = "json";
    bool normalize = false;
    bool check = false;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    std::string suite = "all";  // budget|ir|sp|group-sp|monotone|efficiency|all
    std::size_t instances = 100;
    std::uint64_t seed = 0;
    std::size_t n_low = 3;
    std::size_t n_high = 6;
    std::optional<Corruption> corrupt;
    std::size_t monotone_trials = 50;
    std::size_t group_max_evaluations = 1'000'000;
};

/// Parses "A..B" (or a single "A") into an inclusive range.
std::pair<std::size_t, std::size_t> parse_n_range(const std::string& text);

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

struct WelfareOptions {
    std::string n_list;      // "4,10,1000" and/or ranges "4..200"
    std::string alpha_list;  // "1/2,0.25" or "all" for every valid alpha
    std::string out;         // file path; "-" or empty writes to `out`
};

std::vector<std::size_t> parse_n_list(const std::string& text);

int cmd_welfare(const WelfareOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mbm::cli

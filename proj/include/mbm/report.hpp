#pragma once

// Run reports: everything one mechanism run produces, serialized with a
// stable field order. Rationals are written as "p/q"; fields ending in
// "_approx" carry a 20-significant-digit decimal for reading only.

#include "mbm/captable.hpp"
#include "mbm/properties.hpp"
#include "mbm/welfare.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mbm {

struct AgentLine {
    std::string agent_id;
    std::size_t rank;
    Rational initial_share;
    Rational final_share;
    Rational payment;  // money delta; positive means the agent is paid
    Rational adjusted_utility;
};

struct BranchReport {
    std::size_t m;
    Rational probability;
    std::vector<AgentLine> agents;  // cap-table order
    Rational share_total;
    Rational payment_total;
    Rational welfare;
};

struct RunReport {
    MbmConfig config;
    std::vector<std::string> agent_ids;
    std::vector<Rational> bids;
    Ranking ranking;
    Rational price;
    BranchProbabilities probabilities;
    std::vector<BranchReport> branches;       // high then low; set in expected mode
    std::vector<Rational> expected_utility;   // per agent; set in expected mode
    std::optional<std::uint64_t> seed;
    std::optional<BranchReport> realized;     // set when seeded
    WelfareReport welfare;
    std::vector<PropertyReport> checks;
};

struct RunRequest {
    std::size_t m_bar = 0;
    bool expected = true;
    std::optional<std::uint64_t> seed;
    bool with_checks = false;
};

/// Bids double as valuations: utilities and welfare assume truthful play.
RunReport build_run_report(const std::vector<CapTableRecord>& records, const RunRequest& request);

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);
std::string to_text(const RunReport& report);

}  // namespace mbm

#pragma once

// Value types shared by the mechanism, the property oracles and the welfare
// analytics. All of them are immutable after construction.

#include "mbm/rational.hpp"

#include <cstddef>
#include <vector>

namespace mbm {

using AgentIndex = std::size_t;

/// Agent count n and threshold owner count m_bar, with n > 2 and 1 < m_bar < n.
class MbmConfig {
public:
    MbmConfig(std::size_t n, std::size_t m_bar);

    std::size_t n() const noexcept { return n_; }
    std::size_t m_bar() const noexcept { return m_bar_; }

    friend bool operator==(const MbmConfig&, const MbmConfig&) = default;

private:
    std::size_t n_;
    std::size_t m_bar_;
};

/// Shares on the simplex plus a money balance per agent.
class Allocation {
public:
    /// Initial allocation: the given shares, all money zero.
    explicit Allocation(std::vector<Rational> shares);
    /// Throws InvalidAllocation unless shares are non-negative, sum to exactly
    /// one, and both vectors have the same length.
    Allocation(std::vector<Rational> shares, std::vector<Rational> money);

    /// Skips the simplex check. Used for mechanism outputs, whose
    /// conservation is asserted separately by the property oracles.
    static Allocation unchecked(std::vector<Rational> shares, std::vector<Rational> money);

    std::size_t size() const noexcept { return shares_.size(); }
    const std::vector<Rational>& shares() const noexcept { return shares_; }
    const std::vector<Rational>& money() const noexcept { return money_; }
    const Rational& share(AgentIndex i) const { return shares_.at(i); }
    const Rational& money(AgentIndex i) const { return money_.at(i); }

    Rational share_total() const { return sum(shares_); }
    Rational money_total() const { return sum(money_); }

    friend bool operator==(const Allocation&, const Allocation&) = default;

private:
    Allocation() = default;

    std::vector<Rational> shares_;
    std::vector<Rational> money_;
};

/// One non-negative bid per agent for the whole asset. Also used to carry
/// true valuations. Distinctness is enforced when the profile is ranked.
class BidProfile {
public:
    explicit BidProfile(std::vector<Rational> bids);

    std::size_t size() const noexcept { return bids_.size(); }
    const std::vector<Rational>& bids() const noexcept { return bids_; }
    const Rational& operator[](AgentIndex i) const { return bids_.at(i); }

    BidProfile with_bid(AgentIndex agent, Rational bid) const;

    friend bool operator==(const BidProfile&, const BidProfile&) = default;

private:
    std::vector<Rational> bids_;
};

/// Agents in descending bid order. Ranks are 1-based: rank 1 is the highest bid.
struct Ranking {
    std::vector<AgentIndex> order;    // order[r - 1] is the agent with rank r
    std::vector<std::size_t> rank_of; // rank_of[agent] is in 1..n

    std::size_t size() const noexcept { return order.size(); }
    AgentIndex agent_at(std::size_t rank) const { return order.at(rank - 1); }

    friend bool operator==(const Ranking&, const Ranking&) = default;
};

struct BranchProbabilities {
    Rational high;  // P(m = m_bar): initial shares of the m_bar highest bidders
    Rational low;   // P(m = m_bar - 1): everybody else
};

/// One realized branch of the mechanism.
struct MechanismOutcome {
    std::size_t realized_m;
    Rational price;
    Rational branch_probability;
    Allocation final_allocation;
    std::vector<Rational> money_delta;  // payments added to the initial money
    Ranking ranking;

    bool is_owner(AgentIndex agent) const { return ranking.rank_of.at(agent) <= realized_m; }
};

/// Both branches. high_branch has m = m_bar, low_branch has m = m_bar - 1.
struct ExpectedOutcome {
    MechanismOutcome high_branch;
    MechanismOutcome low_branch;
};

/// A complete mechanism input with true valuations.
struct Instance {
    Allocation initial;
    BidProfile valuations;
    MbmConfig config;
};

}  // namespace mbm

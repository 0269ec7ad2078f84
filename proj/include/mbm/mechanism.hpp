#pragma once

// The Multi-BMBY mechanism. Agents bid for the whole asset; the m_bar-th
// highest bid becomes the price; the number of remaining owners m is m_bar
// or m_bar - 1, drawn so that the threshold agent expects zero surplus.
// Remaining owners buy out the rest in proportion to their initial shares.

#include "mbm/types.hpp"

#include <cstdint>

namespace mbm {

/// Throws DuplicateBids when two agents share a bid, InvalidConfig for n < 3.
Ranking rank_bids(const BidProfile& profile);

/// The m_bar-th highest bid.
Rational threshold_price(const BidProfile& profile, const MbmConfig& config);

BranchProbabilities branch_probabilities(const Allocation& initial, const Ranking& ranking,
                                         const MbmConfig& config);

/// Applies the branch with m owners, m in {m_bar - 1, m_bar}. The price is
/// the m_bar-th bid in both branches.
///
/// Buyers (rank <= m) scale their shares by 1 / S_buy and pay
/// s * (S_sell / S_buy) * p; sellers hand over their shares for s * p.
/// Throws InvalidOwnerCount or DegenerateBuyerMass (S_buy = 0).
MechanismOutcome apply_branch(const Allocation& initial, const BidProfile& profile,
                              const MbmConfig& config, std::size_t m);

/// Both branches with their probabilities. Consumes no randomness.
ExpectedOutcome run_expected(const Allocation& initial, const BidProfile& profile,
                             const MbmConfig& config);

/// Draws m with probability P(m = m_bar) from a generator seeded with `seed`
/// and returns that branch. Same inputs and seed give the same outcome.
MechanismOutcome realize(const Allocation& initial, const BidProfile& profile,
                         const MbmConfig& config, std::uint64_t seed);

/// u_i(final) - u_i(initial) with u_i(s, x) = s * v_i + x, using the agent's
/// true valuation.
Rational adjusted_utility(const Allocation& initial, const MechanismOutcome& outcome,
                          const BidProfile& valuations, AgentIndex agent);

Rational expected_adjusted_utility(const Allocation& initial, const ExpectedOutcome& expected,
                                   const BidProfile& valuations, AgentIndex agent);

namespace detail {

/// Branch evaluation on an already ranked profile with an explicit price.
/// Performs no config validation; m may be anything in 1..n.
MechanismOutcome apply_ranked(const Allocation& initial, const Ranking& ranking,
                              const Rational& price, std::size_t m,
                              const Rational& branch_probability);

/// Sum of initial shares of agents ranked 1..count.
Rational top_share_mass(const Allocation& initial, const Ranking& ranking, std::size_t count);

}  // namespace detail

}  // namespace mbm

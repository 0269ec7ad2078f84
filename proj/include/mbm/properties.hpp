#pragma once

// Brute-force oracles for the mechanism's guarantees: budget balance,
// individual rationality, price monotonicity, strategyproofness, weak group
// strategyproofness and proportionality-preserving ex-post efficiency.
//
// Every comparison is exact. The deviation searches sample each agent's own
// bid on a finite grid. Expected utility as a function of one's own bid only
// changes behaviour where that bid crosses another bid, so one interior
// point per gap plus points just above and below every other bid visit
// every reachable rank and price regime.

#include "mbm/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbm {

enum class Verdict { holds, violated };

std::string_view to_string(Verdict v);

/// Reproducible evidence for a verdict: the evaluated profile, the agents
/// involved and, per agent, the utility difference (or other discrepancy)
/// that decided the case.
struct Witness {
    BidProfile profile;
    std::vector<AgentIndex> agents;
    std::vector<Rational> deltas;
    std::string detail;
};

struct PropertyReport {
    std::string property;
    std::string instance;
    Verdict verdict = Verdict::holds;
    std::optional<Witness> witness;  // always set when violated
    std::size_t evaluations = 0;
    /// Group search only: a joint deviation where nobody loses and somebody
    /// strictly gains. Not a violation of weak group strategyproofness.
    std::optional<Witness> weak_gain;

    bool holds() const noexcept { return verdict == Verdict::holds; }
};

/// Any map from (initial allocation, bids, config) to both branches.
using Mechanism =
    std::function<ExpectedOutcome(const Allocation&, const BidProfile&, const MbmConfig&)>;

Mechanism faithful_mechanism();

/// Deliberately broken variants, used as negative controls for the oracles.
enum class Corruption {
    price_below_threshold,     // price is the (m_bar + 1)-th bid
    antitone_price,            // price = max bid + min bid - (m_bar-th bid)
    non_proportional_scaling,  // the top bidder receives every seller share
    payment_skew,              // one seller is paid 1/1000 too much
};

Mechanism corrupted_mechanism(Corruption kind);
std::optional<Corruption> parse_corruption(std::string_view name);
std::string_view to_string(Corruption kind);

std::string describe_instance(const Allocation& initial, const BidProfile& profile, const MbmConfig& config);

/// 1/1000 of the smallest gap between distinct bids (1/1000 if all equal).
Rational default_delta(const BidProfile& profile);

/// Candidate bids for one deviating agent. Never contains another agent's
/// bid. With resolution r every gap between consecutive other bids gets r
/// evenly spaced interior points; every other bid b contributes b - delta
/// and b + delta; plus one point below the lowest and above the highest.
struct DeviationGrid {
    AgentIndex agent;
    Rational delta;
    std::size_t resolution;
    std::vector<Rational> candidates;  // sorted ascending, distinct, >= 0
};

DeviationGrid deviation_grid(const BidProfile& profile, AgentIndex agent, const Rational& delta,
                             std::size_t resolution = 1);

PropertyReport check_budget_balance(const Allocation& initial, const BidProfile& profile,
                                    const MbmConfig& config,
                                    const Mechanism& mechanism = faithful_mechanism());

/// Checks an already computed outcome for `profile`.
PropertyReport check_budget_balance(const Allocation& initial, const BidProfile& profile,
                                    const ExpectedOutcome& outcome);

PropertyReport check_individual_rationality(const Allocation& initial, const BidProfile& valuations,
                                            const MbmConfig& config,
                                            const Mechanism& mechanism = faithful_mechanism());

/// `trials` random single-bid perturbations, half upward and half downward,
/// none creating a tie. Upward moves must not lower the price and downward
/// moves must not raise it.
PropertyReport check_price_monotonicity(const Allocation& initial, const BidProfile& profile,
                                        const MbmConfig& config, std::size_t trials,
                                        std::uint64_t seed = 0,
                                        const Mechanism& mechanism = faithful_mechanism());

/// For every agent i, bidding v_i against `others_profile` (entry i ignored)
/// must be at least as good as every grid deviation.
PropertyReport check_strategyproofness(const Allocation& initial, const BidProfile& valuations,
                                       const MbmConfig& config, const BidProfile& others_profile,
                                       const Rational& delta, std::size_t resolution = 1,
                                       const Mechanism& mechanism = faithful_mechanism());

struct GroupSearchOptions {
    std::size_t grid_resolution = 1;
    std::optional<Rational> delta;          // defaults to default_delta(valuations)
    std::size_t max_evaluations = 1'000'000;
};

/// Enumerates every coalition of two or more agents and every joint
/// deviation on the product of the members' grids (taken against the
/// truthful profile). Violated iff some joint deviation leaves every member
/// strictly better off. Throws SearchBudgetExceeded before searching if the
/// total number of evaluations would exceed the cap.
PropertyReport check_weak_group_strategyproofness(const Allocation& initial, const BidProfile& valuations,
                                                  const MbmConfig& config,
                                                  const GroupSearchOptions& options = {},
                                                  const Mechanism& mechanism = faithful_mechanism());

/// Both branches under truthful bids: owners keep their initial share
/// ratios, and no seller values the asset more than any owner.
PropertyReport check_pp_expost_efficiency(const Allocation& initial, const BidProfile& valuations,
                                          const MbmConfig& config,
                                          const Mechanism& mechanism = faithful_mechanism());

}  // namespace mbm

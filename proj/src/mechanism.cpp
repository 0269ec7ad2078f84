#include "mbm/mechanism.hpp"

#include "mbm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mbm {

namespace {

void require_sizes(const Allocation& initial, const BidProfile& profile, const MbmConfig& config) {
    if (initial.size() != config.n() || profile.size() != config.n())
        throw InvalidInstance("instance size mismatch: config n = " + std::to_string(config.n()) +
                              ", allocation has " + std::to_string(initial.size()) +
                              " agents, profile has " + std::to_string(profile.size()));
}

void require_owner_count(const MbmConfig& config, std::size_t m) {
    if (m != config.m_bar() && m + 1 != config.m_bar())
        throw InvalidOwnerCount("owner count " + std::to_string(m) + " is not m_bar or m_bar - 1 (m_bar = " +
                                std::to_string(config.m_bar()) + ")");
}

}  // namespace

Ranking rank_bids(const BidProfile& profile) {
    const std::size_t n = profile.size();
    if (n < 3) throw InvalidConfig("need at least 3 bids, got " + std::to_string(n));

    Ranking r;
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), AgentIndex{0});
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](AgentIndex a, AgentIndex b) { return profile[a] > profile[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> ties;
    for (std::size_t k = 0; k < n;) {
        std::size_t j = k + 1;
        while (j < n && profile[r.order[j]] == profile[r.order[k]]) ++j;
        for (std::size_t a = k; a < j; ++a)
            for (std::size_t b = a + 1; b < j; ++b)
                ties.emplace_back(std::min(r.order[a], r.order[b]), std::max(r.order[a], r.order[b]));
        k = j;
    }
    if (!ties.empty()) {
        std::sort(ties.begin(), ties.end());
        throw DuplicateBids(std::move(ties));
    }

    r.rank_of.resize(n);
    for (std::size_t k = 0; k < n; ++k) r.rank_of[r.order[k]] = k + 1;
    return r;
}

Rational threshold_price(const BidProfile& profile, const MbmConfig& config) {
    if (profile.size() != config.n())
        throw InvalidInstance("profile has " + std::to_string(profile.size()) + " bids, config n = " +
                              std::to_string(config.n()));
    const Ranking r = rank_bids(profile);
    return profile[r.agent_at(config.m_bar())];
}

BranchProbabilities branch_probabilities(const Allocation& initial, const Ranking& ranking,
                                         const MbmConfig& config) {
    if (initial.size() != config.n() || ranking.size() != config.n())
        throw InvalidInstance("instance size mismatch");
    Rational high = detail::top_share_mass(initial, ranking, config.m_bar());
    Rational low = Rational(1) - high;
    return {std::move(high), std::move(low)};
}

MechanismOutcome apply_branch(const Allocation& initial, const BidProfile& profile,
                              const MbmConfig& config, std::size_t m) {
    require_sizes(initial, profile, config);
    require_owner_count(config, m);
    const Ranking ranking = rank_bids(profile);
    const Rational price = profile[ranking.agent_at(config.m_bar())];
    const auto probs = branch_probabilities(initial, ranking, config);
    return detail::apply_ranked(initial, ranking, price, m, m == config.m_bar() ? probs.high : probs.low);
}

ExpectedOutcome run_expected(const Allocation& initial, const BidProfile& profile,
                             const MbmConfig& config) {
    require_sizes(initial, profile, config);
    const Ranking ranking = rank_bids(profile);
    const Rational price = profile[ranking.agent_at(config.m_bar())];
    const auto probs = branch_probabilities(initial, ranking, config);
    return {detail::apply_ranked(initial, ranking, price, config.m_bar(), probs.high),
            detail::apply_ranked(initial, ranking, price, config.m_bar() - 1, probs.low)};
}

MechanismOutcome realize(const Allocation& initial, const BidProfile& profile,
                         const MbmConfig& config, std::uint64_t seed) {
    require_sizes(initial, profile, config);
    const Ranking ranking = rank_bids(profile);
    const Rational price = profile[ranking.agent_at(config.m_bar())];
    const auto probs = branch_probabilities(initial, ranking, config);

    // Exact Bernoulli(P_high): uniform integer below the denominator vs. the numerator.
    gmp_randclass rng(gmp_randinit_lc_2exp_size, 128);
    rng.seed(mpz_class(std::to_string(seed), 10));
    const mpz_class draw = rng.get_z_range(probs.high.value().get_den());
    const bool high = draw < probs.high.value().get_num();

    return high ? detail::apply_ranked(initial, ranking, price, config.m_bar(), probs.high)
                : detail::apply_ranked(initial, ranking, price, config.m_bar() - 1, probs.low);
}

Rational adjusted_utility(const Allocation& initial, const MechanismOutcome& outcome,
                          const BidProfile& valuations, AgentIndex agent) {
    const Allocation& final_alloc = outcome.final_allocation;
    return (final_alloc.share(agent) - initial.share(agent)) * valuations[agent] +
           (final_alloc.money(agent) - initial.money(agent));
}

Rational expected_adjusted_utility(const Allocation& initial, const ExpectedOutcome& expected,
                                   const BidProfile& valuations, AgentIndex agent) {
    return expected.high_branch.branch_probability *
               adjusted_utility(initial, expected.high_branch, valuations, agent) +
           expected.low_branch.branch_probability *
               adjusted_utility(initial, expected.low_branch, valuations, agent);
}

namespace detail {

Rational top_share_mass(const Allocation& initial, const Ranking& ranking, std::size_t count) {
    mpq_class acc;
    for (std::size_t rank = 1; rank <= count; ++rank) acc += initial.share(ranking.agent_at(rank)).value();
    return Rational(std::move(acc));
}

MechanismOutcome apply_ranked(const Allocation& initial, const Ranking& ranking,
                              const Rational& price, std::size_t m,
                              const Rational& branch_probability) {
    const std::size_t n = ranking.size();
    const Rational buy_mass = top_share_mass(initial, ranking, m);
    if (buy_mass.sign() == 0)
        throw DegenerateBuyerMass("the " + std::to_string(m) +
                                  " highest bidders hold no initial shares; buyer scaling is undefined");
    const Rational sell_mass = initial.share_total() - buy_mass;
    const Rational scale = Rational(1) + sell_mass / buy_mass;
    const Rational buyer_rate = sell_mass / buy_mass * price;

    std::vector<Rational> shares(n);
    std::vector<Rational> money(n);
    std::vector<Rational> delta(n);
    for (AgentIndex agent = 0; agent < n; ++agent) {
        const Rational& s = initial.share(agent);
        if (ranking.rank_of[agent] <= m) {
            shares[agent] = s * scale;
            delta[agent] = -(s * buyer_rate);
        } else {
            delta[agent] = s * price;
        }
        money[agent] = initial.money(agent) + delta[agent];
    }

    return MechanismOutcome{m, price, branch_probability,
                            Allocation::unchecked(std::move(shares), std::move(money)), std::move(delta),
                            ranking};
}

}  // namespace detail

}  // namespace mbm

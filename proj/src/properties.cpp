#include "mbm/properties.hpp"

#include "mbm/errors.hpp"
#include "mbm/mechanism.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>

namespace mbm {

namespace {

std::string join(const std::vector<Rational>& xs) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    os << ']';
    return os.str();
}

PropertyReport make_report(std::string property, const Allocation& initial, const BidProfile& profile,
                           const MbmConfig& config) {
    PropertyReport r;
    r.property = std::move(property);
    r.instance = describe_instance(initial, profile, config);
    return r;
}

void fail(PropertyReport& report, Witness witness) {
    report.verdict = Verdict::violated;
    report.witness = std::move(witness);
}

const MechanismOutcome& branch(const ExpectedOutcome& e, bool high) {
    return high ? e.high_branch : e.low_branch;
}

std::vector<Rational> expected_utilities(const Allocation& initial, const ExpectedOutcome& outcome,
                                         const BidProfile& valuations) {
    std::vector<Rational> u(valuations.size());
    for (AgentIndex i = 0; i < u.size(); ++i) u[i] = expected_adjusted_utility(initial, outcome, valuations, i);
    return u;
}

bool ties_any_other(const BidProfile& profile, AgentIndex agent, const Rational& bid) {
    for (AgentIndex j = 0; j < profile.size(); ++j)
        if (j != agent && profile[j] == bid) return true;
    return false;
}

// Uniform rational in (0, 1] on a 2^16 grid.
Rational unit_draw(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> dist(1, 1L << 16);
    return Rational(dist(rng), 1L << 16);
}

ExpectedOutcome with_price(const Allocation& initial, const MbmConfig& config, const Ranking& ranking, const Rational& price) {
    const auto probs = branch_probabilities(initial, ranking, config);
    return {detail::apply_ranked(initial, ranking, price, config.m_bar(), probs.high),
            detail::apply_ranked(initial, ranking, price, config.m_bar() - 1, probs.low)};
}

void concentrate_on_top(const Allocation& initial, MechanismOutcome& outcome) {
    const auto& ranking = outcome.ranking;
    std::vector<Rational> shares(initial.size());
    Rational seller_mass;
    for (AgentIndex i = 0; i < shares.size(); ++i) {
        if (outcome.is_owner(i)) shares[i] = initial.share(i);
        else seller_mass += initial.share(i);
    }
    shares[ranking.agent_at(1)] += seller_mass;
    outcome.final_allocation = Allocation::unchecked(std::move(shares), outcome.final_allocation.money());
}

void skew_first_seller(MechanismOutcome& outcome) {
    const AgentIndex seller = outcome.ranking.agent_at(outcome.realized_m + 1);
    const Rational skew(1, 1000);
    outcome.money_delta[seller] += skew;
    auto money = outcome.final_allocation.money();
    money[seller] += skew;
    outcome.final_allocation = Allocation::unchecked(outcome.final_allocation.shares(), std::move(money));
}

}  // namespace

std::string_view to_string(Verdict v) { return v == Verdict::holds ? "holds" : "violated"; }

Mechanism faithful_mechanism() {
    return [](const Allocation& a, const BidProfile& b, const MbmConfig& c) { return run_expected(a, b, c); };
}

Mechanism corrupted_mechanism(Corruption kind) {
    switch (kind) {
    case Corruption::price_below_threshold:
        return [](const Allocation& a, const BidProfile& b, const MbmConfig& c) {
            const Ranking r = rank_bids(b);
            return with_price(a, c, r, b[r.agent_at(c.m_bar() + 1)]);
        };
    case Corruption::antitone_price:
        return [](const Allocation& a, const BidProfile& b, const MbmConfig& c) {
            const Ranking r = rank_bids(b);
            return with_price(a, c, r, b[r.agent_at(1)] + b[r.agent_at(c.n())] - b[r.agent_at(c.m_bar())]);
        };
    case Corruption::non_proportional_scaling:
        return [](const Allocation& a, const BidProfile& b, const MbmConfig& c) {
            ExpectedOutcome e = run_expected(a, b, c);
            concentrate_on_top(a, e.high_branch);
            concentrate_on_top(a, e.low_branch);
            return e;
        };
    case Corruption::payment_skew:
        return [](const Allocation& a, const BidProfile& b, const MbmConfig& c) {
            ExpectedOutcome e = run_expected(a, b, c);
            skew_first_seller(e.high_branch);
            skew_first_seller(e.low_branch);
            return e;
        };
    }
    return faithful_mechanism();
}

std::optional<Corruption> parse_corruption(std::string_view name) {
    for (auto k : {Corruption::price_below_threshold, Corruption::antitone_price,
                   Corruption::non_proportional_scaling, Corruption::payment_skew})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

std::string_view to_string(Corruption kind) {
    switch (kind) {
    case Corruption::price_below_threshold: return "price-below-threshold";
    case Corruption::antitone_price: return "antitone-price";
    case Corruption::non_proportional_scaling: return "non-proportional-scaling";
    case Corruption::payment_skew: return "payment-skew";
    }
    return "unknown";
}

std::string describe_instance(const Allocation& initial, const BidProfile& profile, const MbmConfig& config) {
    std::ostringstream os;
    os << "n=" << config.n() << " m_bar=" << config.m_bar() << " shares=" << join(initial.shares())
       << " bids=" << join(profile.bids());
    return os.str();
}

Rational default_delta(const BidProfile& profile) {
    std::vector<Rational> sorted = profile.bids();
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::optional<Rational> gap;
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        Rational g = sorted[k + 1] - sorted[k];
        if (!gap || g < *gap) gap = std::move(g);
    }
    return gap ? *gap / Rational(1000) : Rational(1, 1000);
}

DeviationGrid deviation_grid(const BidProfile& profile, AgentIndex agent, const Rational& delta,
                             std::size_t resolution) {
    if (delta.sign() <= 0) throw std::invalid_argument("deviation grid needs delta > 0");
    if (resolution == 0) throw std::invalid_argument("deviation grid needs resolution >= 1");
    if (agent >= profile.size()) throw std::out_of_range("deviating agent out of range");

    std::vector<Rational> others;
    for (AgentIndex j = 0; j < profile.size(); ++j)
        if (j != agent) others.push_back(profile[j]);
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());

    std::vector<Rational> c;
    if (others.empty()) {
        c.push_back(delta);
    } else {
        if (Rational below = others.front() - delta; below.sign() >= 0) c.push_back(std::move(below));
        else if (others.front().sign() > 0) c.push_back(others.front() / Rational(2));
        c.push_back(others.back() + delta);
        for (const auto& b : others) {
            if (Rational lo = b - delta; lo.sign() >= 0) c.push_back(std::move(lo));
            c.push_back(b + delta);
        }
        const Rational steps(static_cast<long>(resolution) + 1);
        for (std::size_t k = 0; k + 1 < others.size(); ++k) {
            const Rational width = others[k + 1] - others[k];
            for (std::size_t s = 1; s <= resolution; ++s)
                c.push_back(others[k] + width * Rational(static_cast<long>(s)) / steps);
        }
    }

    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::erase_if(c, [&](const Rational& x) { return std::binary_search(others.begin(), others.end(), x); });
    return {agent, delta, resolution, std::move(c)};
}

PropertyReport check_budget_balance(const Allocation& initial, const BidProfile& profile,
                                    const MbmConfig& config, const Mechanism& mechanism) {
    PropertyReport r = check_budget_balance(initial, profile, mechanism(initial, profile, config));
    r.instance = describe_instance(initial, profile, config);
    return r;
}

PropertyReport check_budget_balance(const Allocation& initial, const BidProfile& profile,
                                    const ExpectedOutcome& outcome) {
    PropertyReport r;
    r.property = "budget-balance";
    r.instance = "n=" + std::to_string(initial.size());
    const Rational initial_shares = initial.share_total();
    const Rational initial_money = initial.money_total();
    for (bool high : {true, false}) {
        const MechanismOutcome& o = branch(outcome, high);
        ++r.evaluations;
        const Rational share_gap = o.final_allocation.share_total() - initial_shares;
        const Rational money_gap = o.final_allocation.money_total() - initial_money;
        const Rational delta_sum = sum(o.money_delta);
        if (share_gap.sign() != 0 || money_gap.sign() != 0 || delta_sum.sign() != 0) {
            std::ostringstream os;
            os << "branch m=" << o.realized_m << ": share surplus " << share_gap << ", money surplus "
               << money_gap << ", payment sum " << delta_sum;
            fail(r, Witness{profile, {}, {share_gap, money_gap}, os.str()});
            return r;
        }
    }
    return r;
}

PropertyReport check_individual_rationality(const Allocation& initial, const BidProfile& valuations,
                                            const MbmConfig& config, const Mechanism& mechanism) {
    PropertyReport r = make_report("individual-rationality", initial, valuations, config);
    const ExpectedOutcome e = mechanism(initial, valuations, config);
    for (bool high : {true, false}) {
        const MechanismOutcome& o = branch(e, high);
        for (AgentIndex i = 0; i < config.n(); ++i) {
            ++r.evaluations;
            Rational u = adjusted_utility(initial, o, valuations, i);
            if (u.sign() < 0) {
                std::ostringstream os;
                os << "agent " << i << " loses " << -u << " in branch m=" << o.realized_m;
                fail(r, Witness{valuations, {i}, {std::move(u)}, os.str()});
                return r;
            }
        }
    }
    return r;
}

PropertyReport check_price_monotonicity(const Allocation& initial, const BidProfile& profile,
                                        const MbmConfig& config, std::size_t trials, std::uint64_t seed,
                                        const Mechanism& mechanism) {
    PropertyReport r = make_report("price-monotonicity", initial, profile, config);
    const Rational base_price = mechanism(initial, profile, config).high_branch.price;

    const auto [lo_it, hi_it] = std::minmax_element(profile.bids().begin(), profile.bids().end());
    const Rational span = *hi_it - *lo_it + Rational(1);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, config.n() - 1);
    for (std::size_t t = 0; t < trials; ++t) {
        const AgentIndex agent = pick(rng);
        const Rational& old_bid = profile[agent];
        bool up = t % 2 == 0 || old_bid.sign() == 0;
        Rational bid;
        do {
            bid = up ? old_bid + unit_draw(rng) * span : old_bid * (Rational(1) - unit_draw(rng));
        } while (ties_any_other(profile, agent, bid) || bid == old_bid);

        const BidProfile moved = profile.with_bid(agent, bid);
        const Rational price = mechanism(initial, moved, config).high_branch.price;
        ++r.evaluations;
        if (up ? price < base_price : price > base_price) {
            std::ostringstream os;
            os << "agent " << agent << (up ? " raises " : " lowers ") << old_bid << " -> " << bid
               << ": price " << base_price << " -> " << price;
            fail(r, Witness{moved, {agent}, {price - base_price}, os.str()});
            return r;
        }
    }
    return r;
}

PropertyReport check_strategyproofness(const Allocation& initial, const BidProfile& valuations,
                                       const MbmConfig& config, const BidProfile& others_profile,
                                       const Rational& delta, std::size_t resolution,
                                       const Mechanism& mechanism) {
    PropertyReport r = make_report("strategyproofness", initial, others_profile, config);
    if (valuations.size() != config.n() || others_profile.size() != config.n())
        throw InvalidInstance("strategyproofness check: size mismatch");

    for (AgentIndex i = 0; i < config.n(); ++i) {
        const BidProfile truthful = others_profile.with_bid(i, valuations[i]);
        const Rational truthful_u =
            expected_adjusted_utility(initial, mechanism(initial, truthful, config), valuations, i);
        ++r.evaluations;

        for (const Rational& bid : deviation_grid(others_profile, i, delta, resolution).candidates) {
            if (bid == valuations[i]) continue;
            const BidProfile deviated = others_profile.with_bid(i, bid);
            const Rational u =
                expected_adjusted_utility(initial, mechanism(initial, deviated, config), valuations, i);
            ++r.evaluations;
            if (u > truthful_u) {
                std::ostringstream os;
                os << "agent " << i << " (v=" << valuations[i] << ") gains " << (u - truthful_u)
                   << " by bidding " << bid;
                fail(r, Witness{deviated, {i}, {u - truthful_u}, os.str()});
                return r;
            }
        }
    }
    return r;
}

PropertyReport check_weak_group_strategyproofness(const Allocation& initial, const BidProfile& valuations,
                                                  const MbmConfig& config, const GroupSearchOptions& options,
                                                  const Mechanism& mechanism) {
    PropertyReport r = make_report("weak-group-strategyproofness", initial, valuations, config);
    const std::size_t n = config.n();
    if (valuations.size() != n) throw InvalidInstance("group check: size mismatch");
    if (n >= 8 * sizeof(unsigned long) - 1) throw SearchBudgetExceeded("too many agents for coalition search");

    const Rational delta = options.delta.value_or(default_delta(valuations));
    std::vector<std::vector<Rational>> grids(n);
    for (AgentIndex i = 0; i < n; ++i)
        grids[i] = deviation_grid(valuations, i, delta, options.grid_resolution).candidates;

    // Size the whole search before running any of it.
    const unsigned long coalitions = 1UL << n;
    std::size_t total = 0;
    for (unsigned long mask = 0; mask < coalitions; ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::size_t product = 1;
        for (AgentIndex i = 0; i < n; ++i) {
            if (!(mask >> i & 1UL)) continue;
            product *= grids[i].size();
            if (product > options.max_evaluations) break;
        }
        total += product;
        if (total > options.max_evaluations)
            throw SearchBudgetExceeded("coalition search needs more than " +
                                       std::to_string(options.max_evaluations) + " evaluations");
    }

    const std::vector<Rational> truthful_u =
        expected_utilities(initial, mechanism(initial, valuations, config), valuations);

    std::vector<Rational> bids = valuations.bids();
    for (unsigned long mask = 0; mask < coalitions; ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<AgentIndex> members;
        for (AgentIndex i = 0; i < n; ++i)
            if (mask >> i & 1UL) members.push_back(i);

        std::vector<std::size_t> cursor(members.size(), 0);
        for (;;) {
            for (std::size_t k = 0; k < members.size(); ++k) bids[members[k]] = grids[members[k]][cursor[k]];

            bool tied = false;
            for (std::size_t a = 0; a < members.size() && !tied; ++a)
                for (std::size_t b = a + 1; b < members.size() && !tied; ++b)
                    tied = bids[members[a]] == bids[members[b]];

            if (!tied) {
                const BidProfile profile(bids);
                const ExpectedOutcome e = mechanism(initial, profile, config);
                ++r.evaluations;
                std::vector<Rational> gains;
                bool all_strict = true;
                bool none_lose = true;
                bool some_strict = false;
                for (AgentIndex j : members) {
                    gains.push_back(expected_adjusted_utility(initial, e, valuations, j) - truthful_u[j]);
                    const int s = gains.back().sign();
                    all_strict = all_strict && s > 0;
                    none_lose = none_lose && s >= 0;
                    some_strict = some_strict || s > 0;
                }
                if (all_strict) {
                    fail(r, Witness{profile, members, std::move(gains),
                                    "every coalition member strictly gains"});
                    return r;
                }
                if (none_lose && some_strict && !r.weak_gain)
                    r.weak_gain = Witness{profile, members, std::move(gains),
                                          "some member strictly gains, none loses"};
            }

            std::size_t k = 0;
            while (k < members.size() && ++cursor[k] == grids[members[k]].size()) cursor[k++] = 0;
            if (k == members.size()) break;
        }
        for (AgentIndex j : members) bids[j] = valuations[j];
    }
    return r;
}

PropertyReport check_pp_expost_efficiency(const Allocation& initial, const BidProfile& valuations,
                                          const MbmConfig& config, const Mechanism& mechanism) {
    PropertyReport r = make_report("pp-expost-efficiency", initial, valuations, config);
    const ExpectedOutcome e = mechanism(initial, valuations, config);
    for (bool high : {true, false}) {
        const MechanismOutcome& o = branch(e, high);
        const auto& fin = o.final_allocation;
        ++r.evaluations;
        for (AgentIndex j = 0; j < config.n(); ++j) {
            if (!o.is_owner(j)) {
                if (fin.share(j).sign() != 0) {
                    fail(r, Witness{valuations, {j}, {fin.share(j)},
                                    "seller " + std::to_string(j) + " keeps a positive share"});
                    return r;
                }
                continue;
            }
            for (AgentIndex k = 0; k < config.n(); ++k) {
                if (k == j) continue;
                if (o.is_owner(k)) {
                    // s'_j / s'_k == s_j / s_k, cross-multiplied
                    const Rational lhs = fin.share(j) * initial.share(k);
                    const Rational rhs = fin.share(k) * initial.share(j);
                    if (lhs != rhs) {
                        std::ostringstream os;
                        os << "owners " << j << "," << k << " change share ratio in branch m=" << o.realized_m;
                        fail(r, Witness{valuations, {j, k}, {lhs - rhs}, os.str()});
                        return r;
                    }
                } else if (valuations[k] > valuations[j]) {
                    std::ostringstream os;
                    os << "seller " << k << " (v=" << valuations[k] << ") values the asset above owner " << j
                       << " (v=" << valuations[j] << ") in branch m=" << o.realized_m;
                    fail(r, Witness{valuations, {k, j}, {valuations[k] - valuations[j]}, os.str()});
                    return r;
                }
            }
        }
    }
    return r;
}

}  // namespace mbm

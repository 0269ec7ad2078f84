#include "mbm/report.hpp"

#include "mbm/mechanism.hpp"

#include <json.hpp>

#include <sstream>

namespace mbm {

namespace {

using json = nlohmann::ordered_json;

BranchReport branch_report(const std::vector<CapTableRecord>& records, const Allocation& initial,
                           const BidProfile& bids, const MechanismOutcome& o) {
    BranchReport b{o.realized_m, o.branch_probability, {}, o.final_allocation.share_total(), sum(o.money_delta),
                   social_welfare(o.final_allocation, bids)};
    for (AgentIndex i = 0; i < records.size(); ++i)
        b.agents.push_back({records[i].agent_id, o.ranking.rank_of[i], initial.share(i), o.final_allocation.share(i),
                            o.money_delta[i], adjusted_utility(initial, o, bids, i)});
    return b;
}

json to_json(const BranchReport& b) {
    json j;
    j["m"] = b.m;
    j["probability"] = b.probability.str();
    j["share_total"] = b.share_total.str();
    j["payment_total"] = b.payment_total.str();
    j["welfare"] = b.welfare.str();
    j["agents"] = json::array();
    for (const auto& a : b.agents) {
        json row;
        row["agent_id"] = a.agent_id;
        row["rank"] = a.rank;
        row["initial_share"] = a.initial_share.str();
        row["final_share"] = a.final_share.str();
        row["payment"] = a.payment.str();
        row["adjusted_utility"] = a.adjusted_utility.str();
        row["final_share_approx"] = a.final_share.decimal();
        row["payment_approx"] = a.payment.decimal();
        j["agents"].push_back(std::move(row));
    }
    return j;
}

json to_json(const PropertyReport& p) {
    json j;
    j["property"] = p.property;
    j["verdict"] = std::string(to_string(p.verdict));
    j["evaluations"] = p.evaluations;
    if (p.witness) {
        json w;
        w["detail"] = p.witness->detail;
        w["agents"] = p.witness->agents;
        w["deltas"] = json::array();
        for (const auto& d : p.witness->deltas) w["deltas"].push_back(d.str());
        w["profile"] = json::array();
        for (const auto& b : p.witness->profile.bids()) w["profile"].push_back(b.str());
        j["witness"] = std::move(w);
    }
    return j;
}

void csv_rows(std::ostringstream& os, const char* label, const Rational& price, const BranchReport& b,
              const std::vector<Rational>& bids) {
    for (std::size_t i = 0; i < b.agents.size(); ++i) {
        const auto& a = b.agents[i];
        os << label << ',' << b.m << ',' << b.probability << ',' << price << ',' << a.agent_id << ',' << a.rank
           << ',' << bids[i] << ',' << a.initial_share << ',' << a.final_share << ',' << a.payment << ','
           << a.adjusted_utility << ',' << a.final_share.decimal() << ',' << a.payment.decimal() << '\n';
    }
}

void text_branch(std::ostringstream& os, const std::string& title, const BranchReport& b) {
    os << title << ": m = " << b.m << ", probability " << b.probability << '\n';
    for (const auto& a : b.agents)
        os << "  " << a.agent_id << "  rank " << a.rank << "  share " << a.initial_share << " -> " << a.final_share
           << "  payment " << a.payment << "  adjusted utility " << a.adjusted_utility << '\n';
    os << "  share total " << b.share_total << ", payment total " << b.payment_total << ", welfare " << b.welfare
       << '\n';
}

}  // namespace

RunReport build_run_report(const std::vector<CapTableRecord>& records, const RunRequest& request) {
    const Allocation initial = allocation_of(records);
    const BidProfile bids = bids_of(records);
    const MbmConfig config(records.size(), request.m_bar);

    const ExpectedOutcome e = run_expected(initial, bids, config);
    RunReport r{config, {}, bids.bids(), e.high_branch.ranking, e.high_branch.price,
                {e.high_branch.branch_probability, e.low_branch.branch_probability},
                {}, {}, request.seed, std::nullopt, welfare_report(initial, bids, config), {}};
    for (const auto& rec : records) r.agent_ids.push_back(rec.agent_id);

    if (request.expected) {
        r.branches.push_back(branch_report(records, initial, bids, e.high_branch));
        r.branches.push_back(branch_report(records, initial, bids, e.low_branch));
        for (AgentIndex i = 0; i < records.size(); ++i)
            r.expected_utility.push_back(expected_adjusted_utility(initial, e, bids, i));
    }
    if (request.seed) r.realized = branch_report(records, initial, bids, realize(initial, bids, config, *request.seed));

    if (request.with_checks) {
        r.checks.push_back(check_budget_balance(initial, bids, config));
        r.checks.push_back(check_individual_rationality(initial, bids, config));
        r.checks.push_back(check_pp_expost_efficiency(initial, bids, config));
        r.checks.push_back(check_price_monotonicity(initial, bids, config, 100));
        r.checks.push_back(check_strategyproofness(initial, bids, config, bids, default_delta(bids)));
        try {
            r.checks.push_back(check_weak_group_strategyproofness(initial, bids, config));
        } catch (const SearchBudgetExceeded&) {
            // too many agents for an exhaustive coalition search; omitted
        }
    }
    return r;
}

std::string to_json(const RunReport& r) {
    json j;
    j["config"] = {{"n", r.config.n()}, {"m_bar", r.config.m_bar()}};
    j["price"] = r.price.str();
    j["price_approx"] = r.price.decimal();
    j["ranking"] = json::array();
    for (std::size_t rank = 1; rank <= r.ranking.size(); ++rank) {
        const AgentIndex a = r.ranking.agent_at(rank);
        j["ranking"].push_back({{"rank", rank}, {"agent_id", r.agent_ids[a]}, {"bid", r.bids[a].str()}});
    }
    j["branch_probabilities"] = {{"high", {{"m", r.config.m_bar()}, {"probability", r.probabilities.high.str()}}},
                                 {"low", {{"m", r.config.m_bar() - 1}, {"probability", r.probabilities.low.str()}}}};
    if (!r.branches.empty()) {
        j["branches"] = json::array();
        for (const auto& b : r.branches) j["branches"].push_back(to_json(b));
        j["expected_adjusted_utility"] = json::array();
        for (std::size_t i = 0; i < r.expected_utility.size(); ++i)
            j["expected_adjusted_utility"].push_back(
                {{"agent_id", r.agent_ids[i]}, {"value", r.expected_utility[i].str()}});
    }
    if (r.realized) {
        json real = to_json(*r.realized);
        j["realized"] = {{"seed", *r.seed}, {"branch", std::move(real)}};
    }
    j["welfare"] = {{"initial", r.welfare.initial_welfare.str()},
                    {"expected", r.welfare.expected_mbm_welfare.str()},
                    {"first_best", r.welfare.first_best.str()},
                    {"preservation_ratio", r.welfare.preservation_ratio.str()},
                    {"preservation_ratio_approx", r.welfare.preservation_ratio.decimal()}};
    if (!r.checks.empty()) {
        j["checks"] = json::array();
        for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
    }
    return j.dump(2) + "\n";
}

std::string to_csv(const RunReport& r) {
    std::ostringstream os;
    os << "branch,m,probability,price,agent_id,rank,bid,initial_share,final_share,payment,adjusted_utility,"
          "final_share_approx,payment_approx\n";
    if (r.branches.size() == 2) {
        csv_rows(os, "high", r.price, r.branches[0], r.bids);
        csv_rows(os, "low", r.price, r.branches[1], r.bids);
    }
    if (r.realized) csv_rows(os, "realized", r.price, *r.realized, r.bids);
    return os.str();
}

std::string to_text(const RunReport& r) {
    std::ostringstream os;
    os << "n = " << r.config.n() << ", m_bar = " << r.config.m_bar() << '\n';
    os << "ranking:";
    for (std::size_t rank = 1; rank <= r.ranking.size(); ++rank)
        os << ' ' << r.agent_ids[r.ranking.agent_at(rank)] << '(' << r.bids[r.ranking.agent_at(rank)] << ')';
    os << "\nprice " << r.price << " (" << r.price.decimal() << ")\n";
    os << "P(m = " << r.config.m_bar() << ") = " << r.probabilities.high << ", P(m = " << r.config.m_bar() - 1
       << ") = " << r.probabilities.low << '\n';
    if (r.branches.size() == 2) {
        text_branch(os, "high branch", r.branches[0]);
        text_branch(os, "low branch", r.branches[1]);
        os << "expected adjusted utility:";
        for (std::size_t i = 0; i < r.expected_utility.size(); ++i)
            os << ' ' << r.agent_ids[i] << '=' << r.expected_utility[i];
        os << '\n';
    }
    if (r.realized) text_branch(os, "realized (seed " + std::to_string(*r.seed) + ")", *r.realized);
    os << "welfare: initial " << r.welfare.initial_welfare << ", expected " << r.welfare.expected_mbm_welfare
       << ", first best " << r.welfare.first_best << ", ratio " << r.welfare.preservation_ratio << " ("
       << r.welfare.preservation_ratio.decimal(6) << ")\n";
    for (const auto& c : r.checks) os << "check " << c.property << ": " << to_string(c.verdict) << '\n';
    return os.str();
}

}  // namespace mbm

// Acceptance suite: one PASS/FAIL line per criterion, each checked against its
// wall-clock limit. Exits nonzero if any criterion fails.

#include "mbm/cli.hpp"
#include "mbm/errors.hpp"
#include "mbm/instances.hpp"
#include "mbm/mechanism.hpp"
#include "mbm/properties.hpp"
#include "mbm/welfare.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace mbm;

namespace {

const std::string kData = MBM_TEST_DATA_DIR;

struct Outcome {
    bool ok = true;
    std::string note;

    void fail(const std::string& why) {
        if (ok) note = why;
        ok = false;
    }
};

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> body;
};

// The shared 1,000-instance suite, n in 3..8.
const std::vector<Instance>& suite() {
    static const std::vector<Instance> instances = [] {
        std::vector<Instance> v;
        for (std::uint64_t s = 0; s < 1000; ++s) v.push_back(generate(random_spec(3, 8, 0xACCE55 + s)));
        return v;
    }();
    return instances;
}

std::string where(std::size_t index, const Instance& inst) {
    return "instance " + std::to_string(index) + ": " + describe_instance(inst.initial, inst.valuations, inst.config);
}

Rational merged_delta(const BidProfile& a, const BidProfile& b) {
    std::vector<Rational> all = a.bids();
    all.insert(all.end(), b.bids().begin(), b.bids().end());
    return default_delta(BidProfile(all));
}

Outcome budget_balance() {
    Outcome o;
    for (std::size_t k = 0; k < suite().size() && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const ExpectedOutcome e = run_expected(inst.initial, inst.valuations, inst.config);
        for (const MechanismOutcome* b : {&e.high_branch, &e.low_branch}) {
            if (b->final_allocation.share_total() != Rational(1)) o.fail("share total != 1, " + where(k, inst));
            Rational money;
            for (const auto& x : b->money_delta) money += x;
            if (money != Rational(0)) o.fail("money total " + money.str() + ", " + where(k, inst));
        }
        if (!check_budget_balance(inst.initial, inst.valuations, inst.config).holds())
            o.fail("budget oracle, " + where(k, inst));
    }
    if (o.ok) o.note = "1000 instances, both branches exact";
    return o;
}

Outcome individual_rationality() {
    Outcome o;
    for (std::size_t k = 0; k < suite().size() && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const ExpectedOutcome e = run_expected(inst.initial, inst.valuations, inst.config);
        for (const MechanismOutcome* b : {&e.high_branch, &e.low_branch})
            for (AgentIndex i = 0; i < inst.valuations.size(); ++i)
                if (adjusted_utility(inst.initial, *b, inst.valuations, i).sign() < 0)
                    o.fail("agent " + std::to_string(i) + " loses, " + where(k, inst));
        if (!check_individual_rationality(inst.initial, inst.valuations, inst.config).holds())
            o.fail("IR oracle, " + where(k, inst));
    }
    if (o.ok) o.note = "1000 instances, every agent in both branches";
    return o;
}

Outcome threshold_zero() {
    Outcome o;
    for (std::size_t k = 0; k < suite().size() && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const ExpectedOutcome e = run_expected(inst.initial, inst.valuations, inst.config);
        const AgentIndex t = e.high_branch.ranking.agent_at(inst.config.m_bar());
        const Rational u = expected_adjusted_utility(inst.initial, e, inst.valuations, t);
        if (u != Rational(0)) o.fail("threshold utility " + u.str() + ", " + where(k, inst));
    }
    if (o.ok) o.note = "1000 instances, exactly 0";
    return o;
}

Outcome strategyproofness() {
    Outcome o;
    std::size_t evaluations = 0;
    for (std::uint64_t s = 0; s < 200 && o.ok; ++s) {
        const Instance inst = generate(random_spec(3, 6, 0x5B000 + s));
        const BidProfile others = random_profile_avoiding(inst.valuations, s);
        const Rational d = merged_delta(inst.valuations, others);
        const auto r = check_strategyproofness(inst.initial, inst.valuations, inst.config, others, d, 1);
        evaluations += r.evaluations;
        if (!r.holds()) o.fail("deviation gains: " + r.witness->detail + ", " + where(s, inst));
        if (s < 100) {
            const auto fine = check_strategyproofness(inst.initial, inst.valuations, inst.config, others,
                                                      d / Rational(10), 10);
            evaluations += fine.evaluations;
            if (fine.verdict != r.verdict) o.fail("verdict changed under refinement, " + where(s, inst));
        }
    }
    if (o.ok) o.note = "200 instances, 100 refined 10x, " + std::to_string(evaluations) + " evaluations";
    return o;
}

Outcome weak_group_strategyproofness() {
    Outcome o;
    std::size_t evaluations = 0;
    for (std::uint64_t s = 0; s < 50 && o.ok; ++s) {
        const Instance inst = generate(random_spec(3, 4, 0x6A000 + s));
        const auto r = check_weak_group_strategyproofness(inst.initial, inst.valuations, inst.config);
        evaluations += r.evaluations;
        if (!r.holds()) o.fail("coalition gains: " + r.witness->detail + ", " + where(s, inst));
    }

    // Threshold agent nudges the price up while keeping its rank: it stays at
    // zero and the seller strictly gains. Must be found yet not flagged.
    const Allocation initial(std::vector<Rational>{Rational(1, 2), Rational(3, 10), Rational(1, 5)});
    const BidProfile v(std::vector<Rational>{10, 5, 2});
    const MbmConfig config(3, 2);
    const BidProfile nudged = v.with_bid(1, 6);
    const auto eu = [&](const BidProfile& b, AgentIndex i) {
        return expected_adjusted_utility(initial, run_expected(initial, b, config), v, i);
    };
    if (eu(nudged, 1) != eu(v, 1) || !(eu(nudged, 2) > eu(v, 2)))
        o.fail("crafted nudge is not a weak gain");
    const auto r = check_weak_group_strategyproofness(initial, v, config);
    evaluations += r.evaluations;
    if (!r.holds()) o.fail("crafted weak gain was flagged as a violation");
    if (!r.weak_gain) o.fail("crafted weak gain not found by the search");
    if (o.ok)
        o.note = "50 instances, " + std::to_string(evaluations) + " evaluations; weak gain recorded, not flagged";
    return o;
}

Outcome price_monotonicity() {
    Outcome o;
    std::size_t trials = 0;
    for (std::size_t k = 0; k < 100 && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const auto r = check_price_monotonicity(inst.initial, inst.valuations, inst.config, 100, k);
        trials += r.evaluations;
        if (!r.holds()) o.fail(r.witness->detail + ", " + where(k, inst));
    }
    if (o.ok && trials < 10000) o.fail("only " + std::to_string(trials) + " perturbations");
    if (o.ok) o.note = std::to_string(trials) + " perturbations";
    return o;
}

Outcome pp_efficiency() {
    Outcome o;
    for (std::size_t k = 0; k < suite().size() && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const auto r = check_pp_expost_efficiency(inst.initial, inst.valuations, inst.config);
        if (!r.holds()) o.fail(r.witness->detail + ", " + where(k, inst));
    }
    if (o.ok) o.note = "1000 instances, ratios and top set exact";
    return o;
}

Outcome closed_form() {
    Outcome o;
    std::size_t points = 0;
    for (std::size_t n = 4; n <= 200 && o.ok; ++n) {
        const Rational nn(static_cast<long>(n));
        for (std::size_t m = 2; m < n && o.ok; ++m) {
            const Rational alpha(static_cast<long>(m), static_cast<long>(n));
            const Instance inst = appendix_instance(n, m);
            const Rational engine = expected_mbm_welfare(inst.initial, inst.valuations, inst.config);
            const Rational closed = appendix_closed_form(n, alpha);
            const std::string at = " at n=" + std::to_string(n) + ", alpha=" + alpha.str();
            if (closed != engine) o.fail("closed form " + closed.str() + " != engine " + engine.str() + at);
            if (!(engine > Rational(1, 2))) o.fail("welfare " + engine.str() + " <= 1/2" + at);
            if (closed - appendix_limit(alpha) != (Rational(2) - alpha) / (Rational(2) * nn))
                o.fail("limit gap mismatch" + at);
            ++points;
        }
    }
    if (appendix_closed_form(10, Rational(1, 2)) != Rational(33, 40)) o.fail("n=10, alpha=1/2 is not 33/40");
    if (o.ok) o.note = std::to_string(points) + " (n, alpha) points; n=10, alpha=1/2 gives 33/40 = 0.825";
    return o;
}

Outcome welfare_improvement() {
    Outcome o;
    for (std::size_t k = 0; k < suite().size() && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const auto w = welfare_report(inst.initial, inst.valuations, inst.config);
        if (w.expected_mbm_welfare < w.initial_welfare) o.fail("welfare drops, " + where(k, inst));
    }
    std::size_t sweeps = 0;
    for (std::size_t k = 0; k < suite().size() && o.ok; ++k) {
        const Instance& inst = suite()[k];
        const std::size_t n = inst.config.n();
        if (n < 4) continue;
        Rational prev = expected_mbm_welfare(inst.initial, inst.valuations, MbmConfig(n, n - 1));
        for (std::size_t m = n - 2; m >= 2; --m) {
            const Rational cur = expected_mbm_welfare(inst.initial, inst.valuations, MbmConfig(n, m));
            if (cur < prev) o.fail("welfare falls as m_bar decreases to " + std::to_string(m) + ", " + where(k, inst));
            prev = cur;
        }
        ++sweeps;
    }
    if (o.ok) o.note = "1000 instances; " + std::to_string(sweeps) + " m_bar sweeps";
    return o;
}

Outcome small_efficiency_ratio() {
    Outcome o;
    const Rational eps(1, 100);
    const Instance inst = efficiency_loss_construction(eps);
    const auto w = welfare_report(inst.initial, inst.valuations, inst.config);
    // independent recomputation from the two branches
    const ExpectedOutcome e = run_expected(inst.initial, inst.valuations, inst.config);
    const Rational by_hand = (e.high_branch.branch_probability *
                                  social_welfare(e.high_branch.final_allocation, inst.valuations) +
                              e.low_branch.branch_probability *
                                  social_welfare(e.low_branch.final_allocation, inst.valuations)) /
                             first_best_welfare(inst.valuations);
    if (by_hand != w.preservation_ratio) o.fail("ratio disagrees with branch recomputation");
    if (!(w.preservation_ratio < eps)) o.fail("ratio " + w.preservation_ratio.str() + " not below 1/100");
    if (!check_budget_balance(inst.initial, inst.valuations, inst.config).holds() ||
        !check_individual_rationality(inst.initial, inst.valuations, inst.config).holds())
        o.fail("construction is not a valid mechanism run");
    if (o.ok) o.note = "ratio " + w.preservation_ratio.str() + " ~ " + w.preservation_ratio.decimal(6);
    return o;
}

Outcome monte_carlo() {
    Outcome o;
    const Allocation initial(std::vector<Rational>{Rational(1, 2), Rational(3, 10), Rational(1, 5)});
    const BidProfile bids(std::vector<Rational>{10, 5, 2});
    const MbmConfig config(3, 2);
    constexpr std::uint64_t kDraws = 100000;
    std::uint64_t high = 0;
    for (std::uint64_t s = 0; s < kDraws; ++s)
        if (realize(initial, bids, config, s).realized_m == 2) ++high;
    const double freq = static_cast<double>(high) / kDraws;
    char buf[64];
    std::snprintf(buf, sizeof buf, "P(m=2) = %.5f over %llu seeds", freq, static_cast<unsigned long long>(kDraws));
    o.note = buf;
    if (freq < 0.79 || freq > 0.81) o.fail(o.note + ", outside 0.8 +- 0.01");
    return o;
}

Outcome cli_golden() {
    Outcome o;
    cli::RunOptions opts;
    opts.captable = kData + "/worked.csv";
    opts.m_bar = 2;
    opts.expected = true;
    std::ostringstream first, second, err;
    if (cli::cmd_run(opts, first, err) != cli::kOk || cli::cmd_run(opts, second, err) != cli::kOk) {
        o.fail("cmd_run failed: " + err.str());
        return o;
    }
    if (first.str() != second.str()) o.fail("output differs between runs");
    std::ifstream golden_file(kData + "/worked_expected.json");
    std::stringstream golden;
    golden << golden_file.rdbuf();
    if (first.str() != golden.str()) o.fail("output differs from golden file");

    const auto doc = nlohmann::json::parse(first.str());
    const auto q = [](const nlohmann::json& j) { return Rational::parse(j.get<std::string>()); };
    if (q(doc["price"]) != Rational(5)) o.fail("price");
    if (q(doc["branch_probabilities"]["high"]["probability"]) != Rational(4, 5) ||
        q(doc["branch_probabilities"]["low"]["probability"]) != Rational(1, 5))
        o.fail("branch probabilities");
    const std::vector<std::vector<Rational>> shares = {{Rational(5, 8), Rational(3, 8), Rational(0)},
                                                       {Rational(1), Rational(0), Rational(0)}};
    for (std::size_t b = 0; b < 2; ++b) {
        const auto& agents = doc["branches"][b]["agents"];
        Rational paid;
        for (std::size_t i = 0; i < 3; ++i) {
            if (q(agents[i]["final_share"]) != shares[b][i]) o.fail("final share, branch " + std::to_string(b));
            paid += q(agents[i]["payment"]);
        }
        if (paid != Rational(0)) o.fail("payments do not sum to zero");
    }
    if (o.ok) o.note = "byte-identical to golden across runs";
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "budget balance", 5, budget_balance},
        {2, "individual rationality", 5, individual_rationality},
        {3, "threshold agent expects zero", 5, threshold_zero},
        {4, "strategyproofness", 120, strategyproofness},
        {5, "weak group strategyproofness", 300, weak_group_strategyproofness},
        {6, "price monotonicity", 10, price_monotonicity},
        {7, "proportional ex-post efficiency", 5, pp_efficiency},
        {8, "equal-shares closed form", 30, closed_form},
        {9, "welfare improvement", 10, welfare_improvement},
        {10, "arbitrarily small efficiency ratio", 1, small_efficiency_ratio},
        {11, "branch sampling frequency", 5, monte_carlo},
        {12, "CLI golden output", 5, cli_golden},
    };

    suite();  // generated once, outside the timed criteria

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_seconds) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "took %.2fs, limit %.0fs", secs, c.limit_seconds);
            o.fail(buf);
        }
        failures += o.ok ? 0 : 1;
        std::printf("[%s] AC%-2d %-36s %7.2fs / %4.0fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.limit_seconds, o.note.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

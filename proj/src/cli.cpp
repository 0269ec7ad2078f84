#include "mbm/cli.hpp"

#include "mbm/captable.hpp"
#include "mbm/errors.hpp"
#include "mbm/instances.hpp"
#include "mbm/report.hpp"
#include "mbm/welfare.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace mbm::cli {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kSuites = {"budget", "ir", "sp", "group-sp", "monotone", "efficiency"};

// Coalition search is exponential; larger instances are skipped by the
// group suite rather than counted against the search budget.
constexpr std::size_t kGroupMaxAgents = 4;

std::size_t parse_size(std::string_view s, const std::string& what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("invalid " + what + ": '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
    // splitmix64 step so neighbouring indices get unrelated streams
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct SuiteTally {
    std::size_t checked = 0;
    std::size_t holds = 0;
    std::size_t violated = 0;
    std::size_t skipped = 0;
    std::size_t budget_exceeded = 0;
};

PropertyReport run_suite(const std::string& suite, const Instance& inst, std::uint64_t seed,
                         const VerifyOptions& options, const Mechanism& mechanism) {
    const auto& [initial, valuations, config] = inst;
    if (suite == "budget") return check_budget_balance(initial, valuations, config, mechanism);
    if (suite == "ir") return check_individual_rationality(initial, valuations, config, mechanism);
    if (suite == "efficiency") return check_pp_expost_efficiency(initial, valuations, config, mechanism);
    if (suite == "monotone")
        return check_price_monotonicity(initial, valuations, config, options.monotone_trials, seed, mechanism);
    if (suite == "sp") {
        const BidProfile others = random_profile_avoiding(valuations, seed);
        std::vector<Rational> all = valuations.bids();
        all.insert(all.end(), others.bids().begin(), others.bids().end());
        return check_strategyproofness(initial, valuations, config, others, default_delta(BidProfile(all)), 1,
                                       mechanism);
    }
    GroupSearchOptions group;
    group.max_evaluations = options.group_max_evaluations;
    return check_weak_group_strategyproofness(initial, valuations, config, group, mechanism);
}

json witness_json(const Witness& w) {
    json j;
    j["detail"] = w.detail;
    j["agents"] = w.agents;
    j["deltas"] = json::array();
    for (const auto& d : w.deltas) j["deltas"].push_back(d.str());
    j["profile"] = json::array();
    for (const auto& b : w.profile.bids()) j["profile"].push_back(b.str());
    return j;
}

}  // namespace

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("MBM_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    std::uint64_t v = 0;
    const std::string_view s(raw);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    if (options.format != "json" && options.format != "csv" && options.format != "text") {
        err << "error: unknown format '" << options.format << "' (json, csv, text)\n";
        return kValidation;
    }
    std::ifstream file(options.captable);
    if (!file) {
        err << "error: cannot open cap table '" << options.captable << "'\n";
        return kValidation;
    }
    try {
        const auto records = parse_captable(file, {options.normalize});
        RunRequest request;
        request.m_bar = options.m_bar;
        request.seed = options.seed ? options.seed : seed_from_env();
        request.expected = options.expected || !request.seed;
        request.with_checks = options.check;
        const RunReport report = build_run_report(records, request);
        if (options.format == "json") out << to_json(report);
        else if (options.format == "csv") out << to_csv(report);
        else out << to_text(report);
        if (options.check)
            for (const auto& c : report.checks)
                if (!c.holds()) return kViolation;
        return kOk;
    } catch (const DegenerateBuyerMass& e) {
        err << "error: degenerate instance: " << e.what() << '\n';
        return kDegenerate;
    } catch (const InvalidInstance& e) {
        err << "error: " << options.captable << ": " << e.what() << '\n';
        return kValidation;
    }
}

std::pair<std::size_t, std::size_t> parse_n_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const std::size_t n = parse_size(text, "n range");
        return {n, n};
    }
    return {parse_size(std::string_view(text).substr(0, dots), "n range"),
            parse_size(std::string_view(text).substr(dots + 2), "n range")};
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    std::vector<std::string> suites;
    if (options.suite == "all") {
        suites = kSuites;
    } else if (std::find(kSuites.begin(), kSuites.end(), options.suite) != kSuites.end()) {
        suites = {options.suite};
    } else {
        err << "error: unknown suite '" << options.suite << "'\n";
        return kValidation;
    }
    if (options.n_low < 3 || options.n_high < options.n_low) {
        err << "error: n range must satisfy 3 <= low <= high\n";
        return kValidation;
    }

    const Mechanism mechanism = options.corrupt ? corrupted_mechanism(*options.corrupt) : faithful_mechanism();
    std::map<std::string, SuiteTally> tally;
    json violations = json::array();

    for (std::size_t i = 0; i < options.instances; ++i) {
        const std::uint64_t seed = instance_seed(options.seed, i);
        const Instance inst = generate(random_spec(options.n_low, options.n_high, seed));
        for (const auto& suite : suites) {
            SuiteTally& t = tally[suite];
            if (suite == "group-sp" && inst.config.n() > kGroupMaxAgents) {
                ++t.skipped;
                continue;
            }
            try {
                const PropertyReport r = run_suite(suite, inst, seed, options, mechanism);
                ++t.checked;
                if (r.holds()) {
                    ++t.holds;
                    continue;
                }
                ++t.violated;
                json v;
                v["suite"] = suite;
                v["instance_index"] = i;
                v["instance"] = r.instance;
                if (r.witness) v["witness"] = witness_json(*r.witness);
                violations.push_back(std::move(v));
            } catch (const SearchBudgetExceeded&) {
                ++t.budget_exceeded;
            }
        }
    }

    int code = kOk;
    std::size_t budget_hits = 0;
    json summary = json::array();
    for (const auto& suite : suites) {
        const SuiteTally& t = tally[suite];
        summary.push_back({{"suite", suite},
                           {"checked", t.checked},
                           {"holds", t.holds},
                           {"violated", t.violated},
                           {"skipped", t.skipped},
                           {"budget_exceeded", t.budget_exceeded}});
        budget_hits += t.budget_exceeded;
    }
    if (!violations.empty()) code = kViolation;
    else if (budget_hits > 0) code = kSearchBudget;

    json doc;
    doc["seed"] = options.seed;
    doc["instances"] = options.instances;
    doc["n_range"] = std::to_string(options.n_low) + ".." + std::to_string(options.n_high);
    doc["mechanism"] = options.corrupt ? std::string(to_string(*options.corrupt)) : std::string("faithful");
    doc["suites"] = std::move(summary);
    doc["violations"] = std::move(violations);
    doc["verdict"] = code == kOk ? "holds" : code == kViolation ? "violated" : "search-budget-exceeded";
    doc["exit_code"] = code;
    out << doc.dump(2) << '\n';
    return code;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> ns;
    for (const auto& item : split_list(text)) {
        const auto [lo, hi] = parse_n_range(item);
        for (std::size_t n = lo; n <= hi; ++n) ns.push_back(n);
    }
    return ns;
}

int cmd_welfare(const WelfareOptions& options, std::ostream& out, std::ostream& err) {
    std::vector<std::size_t> ns;
    std::vector<Rational> alphas;
    const bool all_alphas = options.alpha_list == "all";
    try {
        ns = parse_n_list(options.n_list);
        if (!all_alphas)
            for (const auto& a : split_list(options.alpha_list)) alphas.push_back(Rational::parse(a));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    if (ns.empty() || (!all_alphas && alphas.empty())) {
        err << "error: --n-list and --alpha-list must be non-empty\n";
        return kValidation;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!options.out.empty() && options.out != "-") {
        file.open(options.out);
        if (!file) {
            err << "error: cannot write '" << options.out << "'\n";
            return kValidation;
        }
        sink = &file;
    }

    *sink << "n,alpha,sw_closed_form,sw_engine,preservation_ratio,limit_gap,sw_approx\n";
    int code = kOk;
    for (const std::size_t n : ns) {
        std::vector<Rational> row_alphas = alphas;
        if (all_alphas)
            for (long m = 2; m + 1 <= static_cast<long>(n); ++m) row_alphas.emplace_back(m, static_cast<long>(n));
        for (const Rational& alpha : row_alphas) {
            Rational closed;
            try {
                closed = appendix_closed_form(n, alpha);
            } catch (const InvalidAlpha& e) {
                err << "warning: skipping row: " << e.what() << '\n';
                continue;
            }
            const Rational m = alpha * Rational(static_cast<long>(n));
            const Instance inst = appendix_instance(n, static_cast<std::size_t>(m.value().get_num().get_ui()));
            const WelfareReport w = welfare_report(inst.initial, inst.valuations, inst.config);
            if (w.expected_mbm_welfare != closed) {
                err << "error: closed form " << closed << " != engine " << w.expected_mbm_welfare << " at n = " << n
                    << ", alpha = " << alpha << '\n';
                code = kViolation;
            }
            *sink << n << ',' << alpha << ',' << closed << ',' << w.expected_mbm_welfare << ','
                  << w.preservation_ratio << ',' << (closed - appendix_limit(alpha)) << ',' << closed.decimal()
                  << '\n';
        }
    }
    return code;
}

}  // namespace mbm::cli

#include "mbm/welfare.hpp"

#include "mbm/errors.hpp"
#include "mbm/mechanism.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mbm {

Rational social_welfare(const Allocation& allocation, const BidProfile& valuations) {
    if (allocation.size() != valuations.size()) throw InvalidInstance("welfare: size mismatch");
    mpq_class acc;
    for (AgentIndex i = 0; i < allocation.size(); ++i)
        acc += allocation.share(i).value() * valuations[i].value();
    return Rational(std::move(acc));
}

Rational expected_welfare(const ExpectedOutcome& expected, const BidProfile& valuations) {
    return expected.high_branch.branch_probability *
               social_welfare(expected.high_branch.final_allocation, valuations) +
           expected.low_branch.branch_probability *
               social_welfare(expected.low_branch.final_allocation, valuations);
}

Rational expected_mbm_welfare(const Allocation& initial, const BidProfile& valuations, const MbmConfig& config) {
    return expected_welfare(run_expected(initial, valuations, config), valuations);
}

Rational first_best_welfare(const BidProfile& valuations) {
    if (valuations.size() == 0) throw InvalidInstance("no valuations");
    return *std::max_element(valuations.bids().begin(), valuations.bids().end());
}

WelfareReport welfare_report(const Allocation& initial, const BidProfile& valuations, const MbmConfig& config) {
    WelfareReport r;
    r.initial_welfare = social_welfare(initial, valuations);
    r.expected_mbm_welfare = expected_mbm_welfare(initial, valuations, config);
    r.first_best = first_best_welfare(valuations);
    if (r.first_best.sign() == 0) throw InvalidInstance("first-best welfare is zero; ratio undefined");
    r.preservation_ratio = r.expected_mbm_welfare / r.first_best;
    return r;
}

Rational appendix_closed_form(std::size_t n, const Rational& alpha) {
    if (n < 3) throw InvalidAlpha("need n >= 3, got " + std::to_string(n));
    const Rational owners = alpha * Rational(static_cast<long>(n));
    if (!owners.is_integer() || owners < Rational(2) || owners > Rational(static_cast<long>(n) - 1))
        throw InvalidAlpha("alpha = " + alpha.str() + " with n = " + std::to_string(n) +
                           " does not give an integer m_bar in 2..n-1");
    const Rational slack = Rational(2) - alpha;
    return slack / Rational(2) + slack / Rational(2 * static_cast<long>(n));
}

Rational appendix_limit(const Rational& alpha) { return (Rational(2) - alpha) / Rational(2); }

PartialSums appendix_partial_sums(std::size_t n, std::size_t m_bar) {
    const MbmConfig config(n, m_bar);
    const auto first = [n](long m) {
        const long nn = static_cast<long>(n);
        return Rational(m, nn) * Rational(2 * nn - m + 1, 2);
    };
    const long m = static_cast<long>(config.m_bar());
    return {first(m), first(m - 1)};
}

Instance efficiency_loss_construction(const Rational& epsilon) {
    if (epsilon.sign() <= 0 || epsilon >= Rational(1))
        throw std::invalid_argument("efficiency_loss_construction needs 0 < epsilon < 1, got " + epsilon.str());
    const Rational quarter = epsilon / Rational(4);
    // Expected welfare is eps/4 + (1 - eps/2) * eps/4 + eps/4 < eps against a first best of 1.
    Allocation initial({quarter, Rational(1) - epsilon / Rational(2), quarter});
    BidProfile valuations({Rational(1), quarter, epsilon / Rational(8)});
    return {std::move(initial), std::move(valuations), MbmConfig(3, 2)};
}

}  // namespace mbm

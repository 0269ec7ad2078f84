#pragma once

// Social welfare under the mechanism. Welfare is the share-weighted sum of
// valuations; payments are internal transfers and do not count. All
// quantities assume truthful bidding.

#include "mbm/types.hpp"

namespace mbm {

struct WelfareReport {
    Rational initial_welfare;
    Rational expected_mbm_welfare;
    Rational first_best;          // max_i v_i: the whole asset to the top valuation
    Rational preservation_ratio;  // expected_mbm_welfare / first_best
};

Rational social_welfare(const Allocation& allocation, const BidProfile& valuations);

/// Probability-weighted welfare of both branches of `expected`.
Rational expected_welfare(const ExpectedOutcome& expected, const BidProfile& valuations);

Rational expected_mbm_welfare(const Allocation& initial, const BidProfile& valuations, const MbmConfig& config);

Rational first_best_welfare(const BidProfile& valuations);

/// Throws InvalidInstance when every valuation is zero.
WelfareReport welfare_report(const Allocation& initial, const BidProfile& valuations, const MbmConfig& config);

// Equal shares 1/n and valuations v_i = (n - i + 1) / n, i = 1..n, with
// m_bar = alpha * n.

/// (2 - alpha) / 2 + (2 - alpha) / (2n). Throws InvalidAlpha unless alpha * n
/// is an integer in 2..n-1.
Rational appendix_closed_form(std::size_t n, const Rational& alpha);

/// (2 - alpha) / 2, the large-n limit of appendix_closed_form.
Rational appendix_limit(const Rational& alpha);

struct PartialSums {
    Rational top_m_bar;             // v_1 + ... + v_{m_bar}
    Rational top_m_bar_minus_one;   // v_1 + ... + v_{m_bar - 1}
};

/// Closed forms m/n * (2n - m + 1)/2 for the first m uniform-grid valuations.
PartialSums appendix_partial_sums(std::size_t n, std::size_t m_bar);

/// A three-agent instance whose expected welfare is below `epsilon` times the
/// first best: the top valuation holds a tiny share and so does the lowest
/// bidder, so the buyout rarely concentrates the asset on the top agent.
/// Throws std::invalid_argument unless 0 < epsilon < 1.
Instance efficiency_loss_construction(const Rational& epsilon);

}  // namespace mbm

#pragma once

// Seeded instance generation. Random rationals are integer numerators over
// 2^16, normalized exactly; bids are redrawn until pairwise distinct.

#include "mbm/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace mbm {

enum class ShareModel {
    equal,     // 1/n each
    random,    // positive random weights, normalized
    tiny_top,  // top valuation holds 2^-24, the rest split evenly
};

enum class ValuationModel {
    uniform_grid,  // v_i = (n - i + 1) / n for agent i = 1..n
    random,        // distinct random rationals in [value_low, value_high]
};

struct InstanceSpec {
    std::size_t n = 3;
    ShareModel share_model = ShareModel::random;
    ValuationModel valuation_model = ValuationModel::random;
    std::size_t m_bar = 2;
    std::uint64_t seed = 0;
    Rational value_low = Rational(1);
    Rational value_high = Rational(100);
};

/// Deterministic in the spec. Throws SpecInvalid for n < 3, m_bar outside
/// 2..n-1, or an empty value range.
Instance generate(const InstanceSpec& spec);

/// Equal shares, uniform-grid valuations.
Instance appendix_instance(std::size_t n, std::size_t m_bar);

/// A spec with n drawn from [n_low, n_high], m_bar from 2..n-1, random shares
/// and valuations; derived deterministically from `seed`.
InstanceSpec random_spec(std::size_t n_low, std::size_t n_high, std::uint64_t seed);

/// A non-truthful profile of pairwise distinct bids, none equal to any entry
/// of `avoid`, drawn from the same range as the valuations.
BidProfile random_profile_avoiding(const BidProfile& avoid, std::uint64_t seed);

std::optional<ShareModel> parse_share_model(std::string_view name);
std::optional<ValuationModel> parse_valuation_model(std::string_view name);

}  // namespace mbm

#include "mbm/instances.hpp"

#include "mbm/errors.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace mbm {

namespace {

constexpr long kDenominator = 1L << 16;

// Uniform on {lo + (hi - lo) * k / 2^16 : k = 0..2^16}.
Rational draw_in(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
    std::uniform_int_distribution<long> dist(0, kDenominator);
    return lo + (hi - lo) * Rational(dist(rng), kDenominator);
}

std::vector<Rational> distinct_draws(std::mt19937_64& rng, std::size_t count, const Rational& lo,
                                     const Rational& hi, const std::vector<Rational>& avoid) {
    std::set<Rational> taken(avoid.begin(), avoid.end());
    std::vector<Rational> out;
    out.reserve(count);
    while (out.size() < count) {
        Rational x = draw_in(rng, lo, hi);
        if (taken.insert(x).second) out.push_back(std::move(x));
    }
    return out;
}

}  // namespace

Instance generate(const InstanceSpec& spec) {
    if (spec.n < 3) throw SpecInvalid("instance spec needs n >= 3, got " + std::to_string(spec.n));
    if (spec.m_bar <= 1 || spec.m_bar >= spec.n)
        throw SpecInvalid("instance spec needs 1 < m_bar < n, got m_bar = " + std::to_string(spec.m_bar));
    if (!(spec.value_low < spec.value_high) || spec.value_low.sign() < 0)
        throw SpecInvalid("instance spec needs 0 <= value_low < value_high");

    const std::size_t n = spec.n;
    const long nn = static_cast<long>(n);
    std::mt19937_64 rng(spec.seed);

    std::vector<Rational> values;
    if (spec.valuation_model == ValuationModel::uniform_grid) {
        for (long i = 1; i <= nn; ++i) values.emplace_back(nn - i + 1, nn);
    } else {
        values = distinct_draws(rng, n, spec.value_low, spec.value_high, {});
    }

    std::vector<Rational> shares(n);
    switch (spec.share_model) {
    case ShareModel::equal:
        std::fill(shares.begin(), shares.end(), Rational(1, nn));
        break;
    case ShareModel::random: {
        std::uniform_int_distribution<long> weight(1, kDenominator);
        mpq_class total;
        for (auto& s : shares) {
            s = Rational(weight(rng));
            total += s.value();
        }
        const Rational norm(total);
        for (auto& s : shares) s /= norm;
        break;
    }
    case ShareModel::tiny_top: {
        const auto top = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
        const Rational tiny(1, 1L << 24);
        const Rational rest = (Rational(1) - tiny) / Rational(nn - 1);
        for (std::size_t i = 0; i < n; ++i) shares[i] = i == top ? tiny : rest;
        break;
    }
    }

    return {Allocation(std::move(shares)), BidProfile(std::move(values)), MbmConfig(n, spec.m_bar)};
}

Instance appendix_instance(std::size_t n, std::size_t m_bar) {
    InstanceSpec spec;
    spec.n = n;
    spec.m_bar = m_bar;
    spec.share_model = ShareModel::equal;
    spec.valuation_model = ValuationModel::uniform_grid;
    return generate(spec);
}

InstanceSpec random_spec(std::size_t n_low, std::size_t n_high, std::uint64_t seed) {
    if (n_low < 3 || n_high < n_low) throw SpecInvalid("n range must satisfy 3 <= low <= high");
    std::mt19937_64 rng(seed);
    InstanceSpec spec;
    spec.n = std::uniform_int_distribution<std::size_t>(n_low, n_high)(rng);
    spec.m_bar = std::uniform_int_distribution<std::size_t>(2, spec.n - 1)(rng);
    spec.seed = rng();
    return spec;
}

BidProfile random_profile_avoiding(const BidProfile& avoid, std::uint64_t seed) {
    if (avoid.size() == 0) return BidProfile({});
    const auto [lo, hi] = std::minmax_element(avoid.bids().begin(), avoid.bids().end());
    std::mt19937_64 rng(seed);
    return BidProfile(distinct_draws(rng, avoid.size(), *lo / Rational(2), *hi + (*hi - *lo) + Rational(1),
                                     avoid.bids()));
}

std::optional<ShareModel> parse_share_model(std::string_view name) {
    if (name == "equal") return ShareModel::equal;
    if (name == "random" || name == "dirichlet") return ShareModel::random;
    if (name == "tiny-top" || name == "adversarial-tiny-top") return ShareModel::tiny_top;
    return std::nullopt;
}

std::optional<ValuationModel> parse_valuation_model(std::string_view name) {
    if (name == "uniform-grid") return ValuationModel::uniform_grid;
    if (name == "random") return ValuationModel::random;
    return std::nullopt;
}

}  // namespace mbm

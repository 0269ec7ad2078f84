#include "mbm/types.hpp"

#include "mbm/errors.hpp"

#include <sstream>
#include <string>

namespace mbm {

DuplicateBids::DuplicateBids(std::vector<std::pair<std::size_t, std::size_t>> pairs)
    : InvalidInstance([&] {
          std::ostringstream os;
          os << "duplicate bids between agents";
          for (const auto& [a, b] : pairs) os << " (" << a << "," << b << ")";
          return os.str();
      }()),
      pairs_(std::move(pairs)) {}

MbmConfig::MbmConfig(std::size_t n, std::size_t m_bar) : n_(n), m_bar_(m_bar) {
    if (n <= 2) throw InvalidConfig("need more than 2 agents, got n = " + std::to_string(n));
    if (m_bar <= 1 || m_bar >= n)
        throw InvalidConfig("m_bar must satisfy 1 < m_bar < n, got m_bar = " + std::to_string(m_bar) +
                            " with n = " + std::to_string(n));
}

Allocation::Allocation(std::vector<Rational> shares)
    : Allocation(shares, std::vector<Rational>(shares.size())) {}

Allocation::Allocation(std::vector<Rational> shares, std::vector<Rational> money)
    : shares_(std::move(shares)), money_(std::move(money)) {
    if (shares_.size() != money_.size())
        throw InvalidAllocation("shares and money have different lengths");
    if (shares_.empty()) throw InvalidAllocation("empty allocation");
    for (std::size_t i = 0; i < shares_.size(); ++i)
        if (shares_[i].sign() < 0)
            throw InvalidAllocation("negative share for agent " + std::to_string(i) + ": " +
                                    shares_[i].str());
    if (const Rational total = share_total(); total != Rational(1))
        throw InvalidAllocation("shares sum to " + total.str() + ", not 1");
}

Allocation Allocation::unchecked(std::vector<Rational> shares, std::vector<Rational> money) {
    Allocation a;
    a.shares_ = std::move(shares);
    a.money_ = std::move(money);
    return a;
}

BidProfile::BidProfile(std::vector<Rational> bids) : bids_(std::move(bids)) {
    for (std::size_t i = 0; i < bids_.size(); ++i)
        if (bids_[i].sign() < 0)
            throw InvalidInstance("negative bid for agent " + std::to_string(i) + ": " + bids_[i].str());
}

BidProfile BidProfile::with_bid(AgentIndex agent, Rational bid) const {
    auto bids = bids_;
    bids.at(agent) = std::move(bid);
    return BidProfile(std::move(bids));
}

}  // namespace mbm

#include "mbm/captable.hpp"

#include <istream>
#include <set>
#include <sstream>

namespace mbm {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    for (;;) {
        const auto comma = line.find(',');
        cells.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

Rational parse_cell(std::string_view cell, std::size_t row, std::size_t column, std::string_view name) {
    Rational x;
    try {
        x = Rational::parse(cell);
    } catch (const std::exception& e) {
        throw ParseError(row, column, std::string(name) + ": " + e.what());
    }
    if (x.sign() < 0) throw ParseError(row, column, std::string(name) + " must be non-negative");
    return x;
}

}  // namespace

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& what)
    : InvalidInstance("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
      row_(row),
      column_(column) {}

std::vector<CapTableRecord> parse_captable(std::istream& in, const CapTableOptions& options) {
    std::string line;
    std::size_t row = 0;
    std::size_t columns = 0;

    while (std::getline(in, line)) {
        ++row;
        if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        const auto header = split(line);
        const bool ok = (header.size() == 2 || header.size() == 3) && header[0] == "agent_id" &&
                        header[1] == "share" && (header.size() == 2 || header[2] == "bid");
        if (!ok) throw ParseError(row, 1, "expected header 'agent_id,share' or 'agent_id,share,bid'");
        columns = header.size();
        break;
    }
    if (columns == 0) throw ParseError(row + 1, 1, "missing header row");

    std::vector<CapTableRecord> records;
    std::set<std::string, std::less<>> seen;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != columns)
            throw ParseError(row, std::min(cells.size(), columns) + 1,
                             "expected " + std::to_string(columns) + " fields, got " + std::to_string(cells.size()));
        if (cells[0].empty()) throw ParseError(row, 1, "empty agent_id");
        if (!seen.emplace(cells[0]).second)
            throw DuplicateAgentId("row " + std::to_string(row) + ": agent_id '" + std::string(cells[0]) +
                                   "' appears more than once");

        CapTableRecord rec{std::string(cells[0]), parse_cell(cells[1], row, 2, "share"), std::nullopt};
        if (columns == 3) rec.bid = parse_cell(cells[2], row, 3, "bid");
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw ParseError(row + 1, 1, "cap table has no agents");

    mpq_class total;
    for (const auto& r : records) total += r.share.value();
    const Rational sum_shares(total);
    if (sum_shares != Rational(1)) {
        if (!options.normalize || sum_shares.sign() == 0)
            throw SharesDontSumToOne("shares sum to " + sum_shares.str() + " (" + sum_shares.decimal(12) +
                                     "), not 1; pass --normalize to rescale");
        for (auto& r : records) r.share /= sum_shares;
    }
    return records;
}

std::vector<CapTableRecord> parse_captable(std::string_view text, const CapTableOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_captable(in, options);
}

Allocation allocation_of(const std::vector<CapTableRecord>& records) {
    std::vector<Rational> shares;
    shares.reserve(records.size());
    for (const auto& r : records) shares.push_back(r.share);
    return Allocation(std::move(shares));
}

BidProfile bids_of(const std::vector<CapTableRecord>& records) {
    std::vector<Rational> bids;
    bids.reserve(records.size());
    for (const auto& r : records) {
        if (!r.bid) throw InvalidInstance("agent '" + r.agent_id + "' has no bid");
        bids.push_back(*r.bid);
    }
    return BidProfile(std::move(bids));
}

}  // namespace mbm

#pragma once

// Cap-table files: UTF-8, comma-delimited, header `agent_id,share[,bid]`.
// Numbers may be written as fractions ("1/3") or decimals ("0.125"), and are
// read exactly.

#include "mbm/errors.hpp"
#include "mbm/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbm {

struct CapTableRecord {
    std::string agent_id;
    Rational share;
    std::optional<Rational> bid;
};

/// Malformed cap-table text. Rows and columns are 1-based; the header is row 1.
class ParseError : public InvalidInstance {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what);
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class SharesDontSumToOne : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

class DuplicateAgentId : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

struct CapTableOptions {
    bool normalize = false;  // divide every share by the total instead of rejecting
};

std::vector<CapTableRecord> parse_captable(std::istream& in, const CapTableOptions& options = {});
std::vector<CapTableRecord> parse_captable(std::string_view text, const CapTableOptions& options = {});

Allocation allocation_of(const std::vector<CapTableRecord>& records);

/// Throws InvalidInstance if any record lacks a bid.
BidProfile bids_of(const std::vector<CapTableRecord>& records);

}  // namespace mbm

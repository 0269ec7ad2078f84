#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mbm {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A config, allocation or profile breaks a type invariant.
class InvalidInstance : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

class InvalidAllocation : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

/// Two or more agents submitted the same bid.
class DuplicateBids : public InvalidInstance {
public:
    explicit DuplicateBids(std::vector<std::pair<std::size_t, std::size_t>> pairs);
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const noexcept { return pairs_; }

private:
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

class InvalidOwnerCount : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

/// Every prospective buyer of a branch holds a zero initial share, so the
/// buyer scaling factor is undefined.
class DegenerateBuyerMass : public Error {
public:
    using Error::Error;
};

class InvalidAlpha : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

class SpecInvalid : public InvalidInstance {
public:
    using InvalidInstance::InvalidInstance;
};

/// A coalition search would need more evaluations than the configured cap.
class SearchBudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace mbm

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixexact {

/// Bad hyperparameters, mismatched shapes, out-of-range indices.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A hyperparameter left (or would leave) its valid domain.
class InvalidPrior : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The requested operation is not defined for this family (normal lattices).
class UnsupportedFamily : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The lattice outgrew its configured entry budget.
class ResourceLimit : public std::runtime_error {
public:
    ResourceLimit(const std::string& what, std::size_t reached)
        : std::runtime_error(what), reached_(reached) {}

    std::size_t reached() const noexcept { return reached_; }

private:
    std::size_t reached_;
};

/// k^n exceeds the brute-force enumeration cap.
class OracleCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file could not be read or validated. `line` is 1-based, 0 when not
/// attributable to a line.
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace mixexact

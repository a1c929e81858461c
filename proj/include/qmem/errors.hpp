#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

/// Raised when an argument violates an operation's precondition
/// (out-of-range coordinate, off-grain frequency, malformed grid, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a computation finishes but its result fails a quality gate
/// (asymmetric kernel, unstable PDE march, ...).
class NumericalQualityError : public std::runtime_error {
public:
    explicit NumericalQualityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmem

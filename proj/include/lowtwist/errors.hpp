#ifndef LOWTWIST_ERRORS_HPP
#define LOWTWIST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lowtwist {

// Input outside the supported integer range (public ops accept n < 2^96).
class RangeError : public std::out_of_range {
public:
    explicit RangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// Mathematically invalid input (zero modulus, torsion point where a
// non-torsion point is required, empty sample, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Structurally invalid data: point not on curve, descent tuple violating
// one of its defining conditions. The message names the failed condition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A derived quantity violated an identity that is provably maintained for
// valid inputs. Never expected; indicates a bug if thrown.
class InternalConsistencyError : public std::logic_error {
public:
    explicit InternalConsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

// A configured resource budget (digits, iterations) was exhausted. Carries
// a partial floating estimate when the operation has one to report.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg, double partial = 0.0, bool has_partial = false)
        : std::runtime_error(msg), partial_estimate(partial), has_partial_estimate(has_partial) {}
    double partial_estimate;
    bool has_partial_estimate;
};

// Numeric slack check failed even at the highest supported precision.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

}

#endif

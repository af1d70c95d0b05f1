#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace cxhess {

// Bad shape, out-of-range index, non-Hermitian input.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is well formed but lies outside the set where the operation is defined
// (e.g. a vector outside the cone, a divergent integral).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A curve was evaluated beyond its last knot.
class ExtrapolationError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Construction parameters violate a requirement of the barrier construction.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : std::runtime_error(what + " (achieved error " + format(achieved_error) + ")"),
          achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    static std::string format(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return buf;
    }

    double achieved_error_;
};

} // namespace cxhess

#pragma once

#include <stdexcept>
#include <string>

namespace rbm {

// Invalid or inconsistent configuration (bad parameters, rate mismatches,
// unsupported mark laws).  Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine could not reach its requested tolerance.  Maps to CLI
// exit code 3.  Carries the best value obtained so far.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double partial_value, double error_estimate)
        : std::runtime_error(what), partial(partial_value), estimate(error_estimate) {}

    double partial;
    double estimate;
};

} // namespace rbm

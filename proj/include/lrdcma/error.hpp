#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lrdcma {

// Bad argument or configuration value. Maps to CLI exit code 1.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that did not converge or produced an unusable result. Exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation called on an object that lacks the required state (e.g. no retained increments).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Aggregated validation failures from a config file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

}  // namespace lrdcma

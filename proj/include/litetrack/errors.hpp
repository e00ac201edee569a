#pragma once

#include <stdexcept>
#include <string>

namespace litetrack {

/// Bad run configuration (conflicting options, invalid parameter values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or missing input data (parse failures, bad file contents).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace litetrack

#pragma once

#include <stdexcept>
#include <string>

namespace ouqm {

// Exit codes used by the CLI and mirrored by the error hierarchy.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_error = 3,
    exit_regime_error = 4,
};

// Invalid or inconsistent user input (config file, overrides, bad field values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: eigensolver breakdown, singular shifted operator, norm blow-up.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter region where the model itself is ill-defined (omega * tau_c >= 1).
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ouqm

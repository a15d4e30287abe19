#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nhkr {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters, mismatched grids, malformed config files.
class ConfigError : public Error
{
public:
    using Error::Error;
};

// Bad arguments to a numerical helper (e.g. a fit window holding too few points).
class ParameterError : public ConfigError
{
public:
    using ConfigError::ConfigError;
};

// Negative argument to a special function.
class DomainError : public Error
{
public:
    using Error::Error;
};

// A state whose amplitudes are all zero; its norm has no logarithm.
class DegenerateStateError : public Error
{
public:
    using Error::Error;
};

// A non-finite norm or amplitude was met while evolving. step is the kick index.
class ProtocolError : public Error
{
public:
    ProtocolError(const std::string& what, std::int64_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step)
    {}

    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

} // namespace nhkr

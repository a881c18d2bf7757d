#pragma once

#include <stdexcept>
#include <string>

namespace stokes_bdf {

class InvalidOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Multiplier fails the positivity condition, so no G-matrix exists.
class NoMultiplierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent setup: singular saddle system, unsupported pairing, bad config.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace stokes_bdf

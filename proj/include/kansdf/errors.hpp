#pragma once

#include <stdexcept>
#include <string>

namespace kansdf {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape or schedule mismatch. Message names both shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Backward called before forward, missing cache, etc.
class StateError : public Error {
public:
    using Error::Error;
};

// Bad or insufficient input data (empty category, not enough samples).
class DataError : public Error {
public:
    using Error::Error;
};

// Corrupt files, magic/version mismatch, truncation.
class FormatError : public Error {
public:
    using Error::Error;
};

// Numerical failure: non-finite values, rank deficiency beyond damping.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Bad configuration: unknown keys, out-of-range values.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kansdf

#pragma once

#include <stdexcept>
#include <string>

namespace weakslit {

// Failure categories surface as CLI exit codes.
enum class ErrorCategory { config = 2, numeric = 3, io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// Invalid parameters, unknown keys, unit mismatches.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

// Slit layout that is inconsistent or does not fit on the grid.
class GeometryError : public ConfigError {
public:
    explicit GeometryError(const std::string& what) : ConfigError(what) {}
};

// A feature narrower than the grid can represent.
class ResolutionError : public ConfigError {
public:
    explicit ResolutionError(const std::string& what) : ConfigError(what) {}
};

// Sample arrays that do not match the grid they are used with.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace weakslit

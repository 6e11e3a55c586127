#pragma once

#include <stdexcept>
#include <string>

namespace bdpe {

struct RateDomainError : std::runtime_error {
    explicit RateDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NonErgodicError : std::runtime_error {
    explicit NonErgodicError(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationOverflowError : std::runtime_error {
    explicit TruncationOverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingAnalyticFormError : std::runtime_error {
    explicit MissingAnalyticFormError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingZetaError : std::runtime_error {
    explicit MissingZetaError(const std::string& what) : std::runtime_error(what) {}
};

struct FrontierTooSmallError : std::runtime_error {
    explicit FrontierTooSmallError(const std::string& what) : std::runtime_error(what) {}
};

struct InconclusiveConvergenceError : std::runtime_error {
    explicit InconclusiveConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroDenominatorError : std::runtime_error {
    explicit ZeroDenominatorError(const std::string& what) : std::runtime_error(what) {}
};

struct RequiresFiniteTp0Error : std::runtime_error {
    explicit RequiresFiniteTp0Error(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a tabulated model is asked for a state beyond its arrays.
struct TabulatedRangeError : std::runtime_error {
    explicit TabulatedRangeError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bdpe

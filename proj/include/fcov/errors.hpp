#pragma once

#include <stdexcept>
#include <string>

namespace fcov {

/// Raised when two objects that must share a grid (or a length) do not.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an argument lies outside an operation's domain (empty series, lag >= n, p > n).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised for invalid test or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace fcov

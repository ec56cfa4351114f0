#pragma once

#include <stdexcept>
#include <string>

namespace dielwave {

/// Raised when a caller passes a value outside an operation's domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when configuration or policy tables cannot satisfy a request.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for unreadable/unwritable files and malformed input rows.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dielwave

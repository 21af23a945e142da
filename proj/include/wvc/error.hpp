#pragma once

#include <stdexcept>
#include <string>

namespace wvc {

// Invalid inputs or contract violations. CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem and stream failures. CLI maps these to exit code 2.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wvc

#pragma once

#include <stdexcept>
#include <string>

namespace hmsim
{
// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument
{
  public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised on file read/write failures.
class IoError : public std::runtime_error
{
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};
}  // namespace hmsim

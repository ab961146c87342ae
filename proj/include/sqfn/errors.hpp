#pragma once

#include <stdexcept>
#include <string>

namespace sqfn {

/// A mathematical precondition of a requested computation does not hold
/// (for example a growth function that fails the doubling gate).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqfn

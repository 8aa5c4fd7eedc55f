#pragma once

#include <stdexcept>
#include <string>

namespace coarselab {

// Error taxonomy mirrors the CLI exit contract:
//   verification failure -> 1, usage/validation -> 2, resource caps -> 3.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coarselab

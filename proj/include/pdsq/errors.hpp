#pragma once

#include <stdexcept>
#include <string>

namespace pdsq {

// Rejected input: bad parameters, malformed config or unparseable CLI values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to deliver its contract (non-convergence, bound violation).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system or container format problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdsq

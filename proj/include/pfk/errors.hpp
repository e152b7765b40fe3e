#pragma once

#include <stdexcept>
#include <string>

namespace pfk {

/// Requested (equation, dimension, query) combination is not provided.
class Unsupported : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfk

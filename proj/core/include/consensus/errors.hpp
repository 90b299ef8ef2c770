#pragma once

#include <stdexcept>
#include <string>

namespace consensus {

/// Malformed input data: bad dimensions, broken invariants, unparsable fields.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

/// Request exceeds what the exhaustive algorithms can enumerate.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace consensus

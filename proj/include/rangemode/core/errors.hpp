#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rangemode {

// Build-time rejection of matrices that violate a structural precondition.
// Carries the offending coordinates so negative tests can inspect them.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string what, std::int64_t k, std::int64_t j1, std::int64_t j2)
      : std::runtime_error(std::move(what)), k(k), j1(j1), j2(j2) {}

  std::int64_t k;   // offending row
  std::int64_t j1;  // offending column (or first of a pair)
  std::int64_t j2;  // second column, -1 if unused
};

}  // namespace rangemode

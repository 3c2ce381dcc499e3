#pragma once

#include <stdexcept>
#include <string>

namespace stwave {

/// Mismatched operand shapes (rows/cols/lengths).
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Factorization hit an exactly or numerically singular pivot.
struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested size would overflow index arithmetic.
struct CapacityError : std::length_error {
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

}  // namespace stwave

#pragma once

#include <stdexcept>
#include <string>

namespace orls {

// Mismatched vector/matrix shapes. Operations never truncate silently.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine cannot proceed: non-SPD matrix, singular rank-1
// update, or non-finite values mid-iteration.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unreadable data files (images, mask files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orls

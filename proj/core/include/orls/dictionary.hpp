#pragma once

#include <cstddef>
#include <vector>

#include "orls/linalg.hpp"

namespace orls {

// Orthonormal 2-D DCT-II basis for side x side patches, stored as an n x n
// matrix (n = side^2) whose columns are vectorized basis images. Atom
// (u, v) sits at column u*side + v; pixels are flattened row-major.
// Immutable after construction, safe for concurrent reads.
class Dictionary {
 public:
  static Dictionary dct2d(std::size_t side);

  [[nodiscard]] std::size_t side() const noexcept { return side_; }
  [[nodiscard]] std::size_t order() const noexcept { return side_ * side_; }
  [[nodiscard]] double atom(std::size_t pixel, std::size_t atom_index) const noexcept {
    return d_[pixel * order() + atom_index];
  }

  // z = D x (coefficients to pixels)
  [[nodiscard]] DenseVector synthesize(const DenseVector& coeffs) const;
  // D^T z (pixels to coefficients; the inverse, since D is orthonormal)
  [[nodiscard]] DenseVector analyze(const DenseVector& pixels) const;

 private:
  explicit Dictionary(std::size_t side);

  std::size_t side_ = 0;
  std::vector<double> d_;  // row-major [pixel][atom]
};

Dictionary dct2d_dictionary(std::size_t side);

// a = D^T c: pulls a pixel-space pattern back into coefficient space, so
// that a^T x == c^T z whenever z = D x.
DenseVector sensing_vector(const DenseVector& pattern, const Dictionary& dict);

}  // namespace orls

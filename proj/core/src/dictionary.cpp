#include "orls/dictionary.hpp"

#include <cmath>
#include <numbers>

namespace orls {

Dictionary::Dictionary(std::size_t side) : side_(side), d_(side * side * side * side, 0.0) {}

Dictionary Dictionary::dct2d(std::size_t side) {
  Dictionary dict(side);
  const std::size_t n = dict.order();
  const double p = static_cast<double>(side);
  for (std::size_t u = 0; u < side; ++u) {
    const double alpha_u = std::sqrt((u == 0 ? 1.0 : 2.0) / p);
    for (std::size_t v = 0; v < side; ++v) {
      const double alpha_v = std::sqrt((v == 0 ? 1.0 : 2.0) / p);
      const std::size_t k = u * side + v;
      for (std::size_t i = 0; i < side; ++i) {
        const double ci =
            std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) *
                     static_cast<double>(u) / (2.0 * p));
        for (std::size_t j = 0; j < side; ++j) {
          const double cj =
              std::cos(std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) *
                       static_cast<double>(v) / (2.0 * p));
          dict.d_[(i * side + j) * n + k] = alpha_u * alpha_v * ci * cj;
        }
      }
    }
  }
  return dict;
}

DenseVector Dictionary::synthesize(const DenseVector& coeffs) const {
  if (coeffs.dim() != order()) {
    throw DimensionError("Dictionary::synthesize: coefficient dimension mismatch");
  }
  const std::size_t n = order();
  DenseVector z(n);
  for (std::size_t pix = 0; pix < n; ++pix) {
    const double* row = d_.data() + pix * n;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += row[k] * coeffs[k];
    z[pix] = acc;
  }
  return z;
}

DenseVector Dictionary::analyze(const DenseVector& pixels) const {
  if (pixels.dim() != order()) {
    throw DimensionError("Dictionary::analyze: pixel dimension mismatch");
  }
  const std::size_t n = order();
  DenseVector a(n);
  for (std::size_t pix = 0; pix < n; ++pix) {
    const double* row = d_.data() + pix * n;
    const double zp = pixels[pix];
    for (std::size_t k = 0; k < n; ++k) a[k] += row[k] * zp;
  }
  return a;
}

Dictionary dct2d_dictionary(std::size_t side) { return Dictionary::dct2d(side); }

DenseVector sensing_vector(const DenseVector& pattern, const Dictionary& dict) {
  return dict.analyze(pattern);
}

}  // namespace orls

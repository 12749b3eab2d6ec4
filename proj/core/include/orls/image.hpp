#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "orls/errors.hpp"

namespace orls {

// Real-valued image with row-major, channel-interleaved samples. Intermediate
// values may leave [0, peak]; clamping happens on assembly and on save.
struct ImagePlane {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (gray) or 3 (rgb)
  double peak = 255.0;
  std::vector<double> samples;

  ImagePlane() = default;
  ImagePlane(int w, int h, int c, double pk = 255.0)
      : width(w), height(h), channels(c), peak(pk),
        samples(static_cast<std::size_t>(w) * h * c, 0.0) {}

  [[nodiscard]] std::size_t sample_count() const noexcept { return samples.size(); }
  [[nodiscard]] std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double at(int x, int y, int c) const noexcept { return samples[index(x, y, c)]; }
  double& at(int x, int y, int c) noexcept { return samples[index(x, y, c)]; }

  [[nodiscard]] bool same_shape(const ImagePlane& other) const noexcept {
    return width == other.width && height == other.height && channels == other.channels &&
           peak == other.peak;
  }
};

// Binary PGM (P5) and PPM (P6), 8-bit. The format is chosen from the file
// contents on load and from the channel count on save.
ImagePlane load_image(const std::filesystem::path& path);
void save_image(const ImagePlane& image, const std::filesystem::path& path);

// Additive Gaussian noise on every sample, keyed per sample index; no
// clamping so the corruption statistics stay exact.
ImagePlane add_gaussian_noise(const ImagePlane& image, double sigma, std::uint64_t seed);

// Largest top-left sub-image whose width and height are multiples of the
// given value.
ImagePlane crop_to_multiple(const ImagePlane& image, int multiple);

// Round to the 8-bit grid and clamp to [0, peak], as saving then loading
// would.
ImagePlane quantize(const ImagePlane& image);

}  // namespace orls

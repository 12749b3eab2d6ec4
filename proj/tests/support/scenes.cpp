#include "support/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scenes {

namespace {

double base_value(int which, double x, double y, double size) {
  constexpr double tau = 2.0 * std::numbers::pi;
  switch (which % 3) {
    case 0:
      return 120.0 + 80.0 * std::cos(tau * x / size) * std::cos(tau * y / size) +
             40.0 * std::sin(tau * (x + y) / 32.0);
    case 1:
      return 60.0 + 140.0 * std::exp(-((x - 32.0) * (x - 32.0) + (y - 28.0) * (y - 28.0)) / 300.0) +
             30.0 * std::sin(tau * x / 16.0);
    default:
      return 200.0 - 2.0 * std::abs(x - y) + 25.0 * std::cos(tau * y / 21.0);
  }
}

}  // namespace

orls::ImagePlane make_test_scene(int which, int size, int channels) {
  orls::ImagePlane img(size, size, channels, 255.0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double fx = static_cast<double>(x);
      const double fy = static_cast<double>(y);
      const double texture = 2.0 * std::sin(1.7 * fx + 0.9 * fy) * std::cos(2.3 * fy - 1.1 * fx);
      for (int c = 0; c < channels; ++c) {
        // Channels get slightly shifted structure so color runs are not
        // degenerate copies.
        const double v = base_value(which + c, fx, fy, static_cast<double>(size)) + texture;
        img.at(x, y, c) = std::clamp(std::round(v), 0.0, 255.0);
      }
    }
  }
  return img;
}

}  // namespace scenes

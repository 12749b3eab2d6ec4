#include "orls/metrics.hpp"

#include <cmath>
#include <limits>

namespace orls {

namespace {

void require_comparable(const ImagePlane& a, const ImagePlane& b, const char* where) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(where) + ": images differ in shape or peak");
  }
}

}  // namespace

double psnr(const ImagePlane& reference, const ImagePlane& test) {
  require_comparable(reference, test, "psnr");
  double sq = 0.0;
  for (std::size_t i = 0; i < reference.samples.size(); ++i) {
    const double d = reference.samples[i] - test.samples[i];
    sq += d * d;
  }
  const double mse = sq / static_cast<double>(reference.samples.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(reference.peak * reference.peak / mse);
}

double ssim(const ImagePlane& reference, const ImagePlane& test) {
  require_comparable(reference, test, "ssim");
  const int w = kSsimWindow;
  if (reference.width < w || reference.height < w) {
    throw DimensionError("ssim: image smaller than the 8x8 window");
  }

  const double c1 = (0.01 * reference.peak) * (0.01 * reference.peak);
  const double c2 = (0.03 * reference.peak) * (0.03 * reference.peak);
  const int bx_count = reference.width / w;
  const int by_count = reference.height / w;
  const double window_n = static_cast<double>(w) * w;

  double channel_sum = 0.0;
  for (int c = 0; c < reference.channels; ++c) {
    double block_sum = 0.0;
    for (int by = 0; by < by_count; ++by) {
      for (int bx = 0; bx < bx_count; ++bx) {
        double mx = 0.0, my = 0.0;
        for (int i = 0; i < w; ++i) {
          for (int j = 0; j < w; ++j) {
            mx += reference.at(bx * w + j, by * w + i, c);
            my += test.at(bx * w + j, by * w + i, c);
          }
        }
        mx /= window_n;
        my /= window_n;

        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int i = 0; i < w; ++i) {
          for (int j = 0; j < w; ++j) {
            const double dx = reference.at(bx * w + j, by * w + i, c) - mx;
            const double dy = test.at(bx * w + j, by * w + i, c) - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
          }
        }
        sxx /= window_n;
        syy /= window_n;
        sxy /= window_n;

        const double num = (2.0 * mx * my + c1) * (2.0 * sxy + c2);
        const double den = (mx * mx + my * my + c1) * (sxx + syy + c2);
        block_sum += num / den;
      }
    }
    channel_sum += block_sum / (static_cast<double>(bx_count) * by_count);
  }
  return channel_sum / reference.channels;
}

}  // namespace orls

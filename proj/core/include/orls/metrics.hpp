#pragma once

#include "orls/image.hpp"

namespace orls {

// 10 log10(peak^2 / MSE), MSE over all samples and channels. Identical
// images return +infinity; never feed that to arithmetic that assumes
// finiteness.
double psnr(const ImagePlane& reference, const ImagePlane& test);

// Mean structural similarity over 8x8 non-overlapping uniform windows with
// C1 = (0.01 peak)^2, C2 = (0.03 peak)^2, population statistics, channels
// averaged. Deliberately the simple fixed-window variant, not the 11x11
// Gaussian one. Requires both dimensions >= 8.
double ssim(const ImagePlane& reference, const ImagePlane& test);

inline constexpr int kSsimWindow = 8;

}  // namespace orls

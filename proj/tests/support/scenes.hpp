#pragma once

#include "orls/image.hpp"

namespace scenes {

// Deterministic synthetic 8-bit test scenes: smooth structures plus a mild
// high-frequency texture, quantized to the integer grid. Variants 0..2 are
// distinct compositions.
orls::ImagePlane make_test_scene(int which, int size = 64, int channels = 1);

}  // namespace scenes

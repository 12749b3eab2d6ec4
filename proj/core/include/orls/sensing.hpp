#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "orls/dictionary.hpp"
#include "orls/linalg.hpp"

namespace orls {

// Random binary acquisition pattern for one time step. Bits are drawn
// Bernoulli(1/2) from the counter generator: bits[j] = counter_hash(seed, j) & 1.
struct BinaryMask {
  std::size_t side = 0;
  std::vector<std::uint8_t> bits;  // row-major, each exactly 0 or 1
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t dim() const noexcept { return bits.size(); }
  [[nodiscard]] DenseVector as_vector() const;
};

BinaryMask random_binary_mask(std::size_t side, std::uint64_t seed);

// Masks for time steps 1..count; mask i is seeded rng::derive_seed(seed, i).
std::vector<BinaryMask> make_mask_sequence(std::size_t side, std::size_t count,
                                           std::uint64_t seed);

// Additive Gaussian measurement noise; sigma = 0 means exactly noiseless.
struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// y = c^T z + sigma * N(0,1), with the noise draw keyed on (noise.seed, t).
double measure(const DenseVector& z, const BinaryMask& mask, const NoiseModel& noise,
               std::uint64_t t);

struct FpaRecord {
  std::size_t patch = 0;
  std::uint64_t t = 0;  // 1-based time step
  double y = 0.0;
};

// Per-patch measurement stream: for each time step t (outer) and each patch
// (inner), emits measure(z_patch, masks[t-1], noise, key) with noise key
// (t-1)*patch_count + patch + 1, so patches receive independent noise. One
// mask per time step is shared by all patches.
std::vector<FpaRecord> fpa_stream(std::span<const DenseVector> patches,
                                  std::span<const BinaryMask> masks, const NoiseModel& noise);

// Mask file: header line "side=<p> count=<m> seed=<s>" followed by one mask
// per line as side^2 '0'/'1' characters, row-major.
void write_mask_file(const std::filesystem::path& path, std::span<const BinaryMask> masks,
                     std::size_t side, std::uint64_t master_seed);

struct MaskFile {
  std::size_t side = 0;
  std::uint64_t seed = 0;
  std::vector<BinaryMask> masks;
};

MaskFile read_mask_file(const std::filesystem::path& path);

// Noise level that corrupts a signal with the given peak to the target PSNR:
// sigma = peak / 10^(psnr/20).
double sigma_for_target_psnr(double peak, double psnr_db);

}  // namespace orls

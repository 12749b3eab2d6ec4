#include "orls/sensing.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "orls/rng.hpp"

namespace orls {

DenseVector BinaryMask::as_vector() const {
  DenseVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v[i] = static_cast<double>(bits[i]);
  return v;
}

BinaryMask random_binary_mask(std::size_t side, std::uint64_t seed) {
  BinaryMask mask;
  mask.side = side;
  mask.seed = seed;
  mask.bits.resize(side * side);
  for (std::size_t j = 0; j < mask.bits.size(); ++j) {
    mask.bits[j] = static_cast<std::uint8_t>(rng::counter_hash(seed, j) & 1u);
  }
  return mask;
}

std::vector<BinaryMask> make_mask_sequence(std::size_t side, std::size_t count,
                                           std::uint64_t seed) {
  std::vector<BinaryMask> masks;
  masks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    masks.push_back(random_binary_mask(side, rng::derive_seed(seed, i)));
  }
  return masks;
}

double measure(const DenseVector& z, const BinaryMask& mask, const NoiseModel& noise,
               std::uint64_t t) {
  if (z.dim() != mask.dim()) {
    throw DimensionError("measure: signal dimension does not match mask");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i) {
    if (mask.bits[i]) acc += z[i];
  }
  if (noise.sigma > 0.0) acc += noise.sigma * rng::gaussian(noise.seed, t);
  return acc;
}

std::vector<FpaRecord> fpa_stream(std::span<const DenseVector> patches,
                                  std::span<const BinaryMask> masks, const NoiseModel& noise) {
  std::vector<FpaRecord> records;
  records.reserve(patches.size() * masks.size());
  for (std::size_t step = 0; step < masks.size(); ++step) {
    const std::uint64_t t = step + 1;
    for (std::size_t p = 0; p < patches.size(); ++p) {
      const std::uint64_t key = step * patches.size() + p + 1;
      records.push_back({p, t, measure(patches[p], masks[step], noise, key)});
    }
  }
  return records;
}

void write_mask_file(const std::filesystem::path& path, std::span<const BinaryMask> masks,
                     std::size_t side, std::uint64_t master_seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_mask_file: cannot open " + path.string());
  out << "side=" << side << " count=" << masks.size() << " seed=" << master_seed << "\n";
  std::string line(side * side, '0');
  for (const BinaryMask& mask : masks) {
    if (mask.dim() != side * side) {
      throw DimensionError("write_mask_file: mask does not match header side");
    }
    for (std::size_t i = 0; i < mask.bits.size(); ++i) line[i] = mask.bits[i] ? '1' : '0';
    out << line << "\n";
  }
  if (!out) throw DataError("write_mask_file: write failed for " + path.string());
}

MaskFile read_mask_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("read_mask_file: cannot open " + path.string());

  std::string header;
  if (!std::getline(in, header)) throw DataError("read_mask_file: missing header");
  std::size_t side = 0, count = 0;
  std::uint64_t seed = 0;
  {
    std::istringstream hs(header);
    std::string token;
    bool have_side = false, have_count = false, have_seed = false;
    while (hs >> token) {
      if (token.starts_with("side=")) {
        side = std::stoull(token.substr(5));
        have_side = true;
      } else if (token.starts_with("count=")) {
        count = std::stoull(token.substr(6));
        have_count = true;
      } else if (token.starts_with("seed=")) {
        seed = std::stoull(token.substr(5));
        have_seed = true;
      }
    }
    if (!have_side || !have_count || !have_seed || side == 0) {
      throw DataError("read_mask_file: malformed header: " + header);
    }
  }

  MaskFile file;
  file.side = side;
  file.seed = seed;
  file.masks.reserve(count);
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw DataError("read_mask_file: truncated mask file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != side * side) {
      throw DataError("read_mask_file: mask line " + std::to_string(i + 1) +
                      " has wrong length");
    }
    BinaryMask mask;
    mask.side = side;
    mask.seed = rng::derive_seed(seed, i);
    mask.bits.resize(side * side);
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (line[j] == '0') {
        mask.bits[j] = 0;
      } else if (line[j] == '1') {
        mask.bits[j] = 1;
      } else {
        throw DataError("read_mask_file: invalid character in mask line " +
                        std::to_string(i + 1));
      }
    }
    file.masks.push_back(std::move(mask));
  }
  return file;
}

double sigma_for_target_psnr(double peak, double psnr_db) {
  return peak / std::pow(10.0, psnr_db / 20.0);
}

}  // namespace orls

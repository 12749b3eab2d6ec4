#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "orls/dictionary.hpp"
#include "orls/image.hpp"
#include "orls/sensing.hpp"
#include "orls/solvers.hpp"

namespace orls {

// Non-overlapping tiling of an image plane into square patches; patch k
// covers block (k / cols, k % cols), pixels flattened row-major.
struct PatchGrid {
  int patch_side = 0;
  int cols = 0;
  int rows = 0;

  [[nodiscard]] std::size_t patch_count() const noexcept {
    return static_cast<std::size_t>(cols) * rows;
  }
  [[nodiscard]] std::size_t patch_dim() const noexcept {
    return static_cast<std::size_t>(patch_side) * patch_side;
  }
};

// Requires patch_side to divide both image dimensions; callers that want to
// accept arbitrary sizes crop first (see crop_to_multiple).
PatchGrid make_patch_grid(const ImagePlane& image, int patch_side);

std::vector<DenseVector> extract_patches(const ImagePlane& image, const PatchGrid& grid,
                                         int channel);
// Inverse of extract_patches for one channel; clamps to [0, peak].
void assemble_into(ImagePlane& image, int channel, std::span<const DenseVector> patches,
                   const PatchGrid& grid);
ImagePlane assemble_patches(std::span<const DenseVector> patches, const PatchGrid& grid,
                            double peak = 255.0);

struct MetricsRecord {
  std::uint64_t t = 0;            // measurements absorbed per patch
  double pct_measurements = 0.0;  // 100 * t / mask count
  double psnr_db = 0.0;
  double ssim = 0.0;
  // CG iterations summed over all patches and channels for the steps since
  // the previous record.
  std::uint64_t cg_iters_total = 0;
};

struct MetricsTrajectory {
  std::vector<MetricsRecord> records;
};

// CSV with header t,pct_measurements,psnr_db,ssim,cg_iters_total. Infinite
// PSNR is written as "inf".
void write_trajectory_csv(const MetricsTrajectory& trajectory, std::ostream& out);
void write_trajectory_csv(const MetricsTrajectory& trajectory,
                          const std::filesystem::path& path);

enum class StopMode {
  kFixedCount,        // stop once t >= threshold
  kEstimatePlateau,   // stop after `patience` consecutive small estimate changes
  kMetricThreshold,   // stop once psnr_db >= threshold (reference-aware)
};

struct StopRule {
  StopMode mode = StopMode::kEstimatePlateau;
  double threshold = 1e-4;
  int patience = 3;
};

bool should_stop(const StopRule& rule, const MetricsTrajectory& trajectory,
                 std::span<const double> estimate_changes);

struct ReconstructOptions {
  OrlsParams params;
  StopRule stop{StopMode::kFixedCount, 0.0, 1};  // see make_default_stop_rule
  int eval_stride = 1;
  int threads = 1;
  std::vector<int> snapshot_pcts;  // e.g. {25, 75, 100}
};

// Reference-free default: plateau with threshold 1e-4, patience 3.
StopRule make_default_stop_rule();

struct Snapshot {
  int pct = 0;
  std::uint64_t t = 0;
  ImagePlane image;
};

struct ReconstructResult {
  ImagePlane image;
  MetricsTrajectory trajectory;
  std::vector<Snapshot> snapshots;
  std::uint64_t steps_not_converged = 0;  // patch-steps where CG hit its cap
};

// Drives the per-patch measurement stream over the scene and folds one ORLS
// solver per (channel, patch). Patches advance on `threads` workers between
// evaluation points; results are identical for any worker count. Metrics are
// evaluated against metric_reference (the scene itself when null) every
// eval_stride measurements.
ReconstructResult reconstruct_online(const ImagePlane& scene, const PatchGrid& grid,
                                     const Dictionary& dict, std::span<const BinaryMask> masks,
                                     const NoiseModel& noise, const ReconstructOptions& options,
                                     const ImagePlane* metric_reference = nullptr);

struct BatchOptions {
  OrlsParams params;
  std::size_t n_outer = 30;
  int threads = 1;
};

// Batch IRLS baseline over the identical measurement stream.
ImagePlane reconstruct_batch(const ImagePlane& scene, const PatchGrid& grid,
                             const Dictionary& dict, std::span<const BinaryMask> masks,
                             const NoiseModel& noise, const BatchOptions& options);

}  // namespace orls

#include "orls/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "orls/metrics.hpp"
#include "orls/rng.hpp"

namespace orls {

namespace {

// Static contiguous partition so results never depend on scheduling.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), count == 0 ? 1 : count);
  if (workers <= 1) {
    chunk_fn(0, count);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto guarded = [&](std::size_t begin, std::size_t end) {
    try {
      chunk_fn(begin, end);
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(w * chunk, count);
    const std::size_t end = std::min(begin + chunk, count);
    pool.emplace_back(guarded, begin, end);
  }
  guarded(0, std::min(chunk, count));
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string format_csv_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace

PatchGrid make_patch_grid(const ImagePlane& image, int patch_side) {
  if (patch_side <= 0) throw DimensionError("make_patch_grid: patch side must be positive");
  if (image.width % patch_side != 0 || image.height % patch_side != 0) {
    throw DimensionError("make_patch_grid: image " + std::to_string(image.width) + "x" +
                         std::to_string(image.height) + " is not divisible by patch side " +
                         std::to_string(patch_side) + " (crop first)");
  }
  return PatchGrid{patch_side, image.width / patch_side, image.height / patch_side};
}

std::vector<DenseVector> extract_patches(const ImagePlane& image, const PatchGrid& grid,
                                         int channel) {
  if (grid.cols * grid.patch_side != image.width ||
      grid.rows * grid.patch_side != image.height) {
    throw DimensionError("extract_patches: grid does not match image");
  }
  if (channel < 0 || channel >= image.channels) {
    throw DimensionError("extract_patches: channel out of range");
  }
  const int p = grid.patch_side;
  std::vector<DenseVector> patches;
  patches.reserve(grid.patch_count());
  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      DenseVector patch(grid.patch_dim());
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          patch[static_cast<std::size_t>(i) * p + j] =
              image.at(bx * p + j, by * p + i, channel);
        }
      }
      patches.push_back(std::move(patch));
    }
  }
  return patches;
}

void assemble_into(ImagePlane& image, int channel, std::span<const DenseVector> patches,
                   const PatchGrid& grid) {
  if (patches.size() != grid.patch_count()) {
    throw DimensionError("assemble_into: patch count does not match grid");
  }
  if (grid.cols * grid.patch_side != image.width ||
      grid.rows * grid.patch_side != image.height) {
    throw DimensionError("assemble_into: grid does not match image");
  }
  if (channel < 0 || channel >= image.channels) {
    throw DimensionError("assemble_into: channel out of range");
  }
  const int p = grid.patch_side;
  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      const DenseVector& patch = patches[static_cast<std::size_t>(by) * grid.cols + bx];
      if (patch.dim() != grid.patch_dim()) {
        throw DimensionError("assemble_into: patch dimension does not match grid");
      }
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          image.at(bx * p + j, by * p + i, channel) =
              std::clamp(patch[static_cast<std::size_t>(i) * p + j], 0.0, image.peak);
        }
      }
    }
  }
}

ImagePlane assemble_patches(std::span<const DenseVector> patches, const PatchGrid& grid,
                            double peak) {
  ImagePlane image(grid.cols * grid.patch_side, grid.rows * grid.patch_side, 1, peak);
  assemble_into(image, 0, patches, grid);
  return image;
}

void write_trajectory_csv(const MetricsTrajectory& trajectory, std::ostream& out) {
  out << "t,pct_measurements,psnr_db,ssim,cg_iters_total\n";
  for (const MetricsRecord& r : trajectory.records) {
    out << r.t << ',' << format_csv_double(r.pct_measurements) << ','
        << format_csv_double(r.psnr_db) << ',' << format_csv_double(r.ssim) << ','
        << r.cg_iters_total << '\n';
  }
}

void write_trajectory_csv(const MetricsTrajectory& trajectory,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_trajectory_csv: cannot open " + path.string());
  write_trajectory_csv(trajectory, out);
  if (!out) throw DataError("write_trajectory_csv: write failed for " + path.string());
}

StopRule make_default_stop_rule() { return StopRule{StopMode::kEstimatePlateau, 1e-4, 3}; }

bool should_stop(const StopRule& rule, const MetricsTrajectory& trajectory,
                 std::span<const double> estimate_changes) {
  switch (rule.mode) {
    case StopMode::kFixedCount:
      return !trajectory.records.empty() &&
             static_cast<double>(trajectory.records.back().t) >= rule.threshold;
    case StopMode::kEstimatePlateau: {
      if (estimate_changes.size() < static_cast<std::size_t>(rule.patience)) return false;
      for (std::size_t i = estimate_changes.size() - rule.patience;
           i < estimate_changes.size(); ++i) {
        if (estimate_changes[i] > rule.threshold) return false;
      }
      return true;
    }
    case StopMode::kMetricThreshold:
      return !trajectory.records.empty() && trajectory.records.back().psnr_db >= rule.threshold;
  }
  return false;
}

namespace {

struct PatchWorkspace {
  std::vector<DenseVector> measured;          // per channel*patch, the z vectors
  std::vector<std::vector<FpaRecord>> records;  // per channel, t-outer patch-inner
  std::vector<DenseVector> sensing_rows;      // a_t per time step, shared
  std::size_t patch_count = 0;
  int channels = 1;
};

PatchWorkspace prepare_stream(const ImagePlane& scene, const PatchGrid& grid,
                              const Dictionary& dict, std::span<const BinaryMask> masks,
                              const NoiseModel& noise) {
  if (masks.empty()) throw DataError("reconstruct: mask list is empty");
  if (dict.order() != grid.patch_dim()) {
    throw DimensionError("reconstruct: dictionary order does not match patch size");
  }
  for (const BinaryMask& mask : masks) {
    if (mask.dim() != grid.patch_dim()) {
      throw DimensionError("reconstruct: mask size does not match patch size");
    }
  }

  PatchWorkspace ws;
  ws.channels = scene.channels;
  ws.patch_count = grid.patch_count();
  ws.sensing_rows.reserve(masks.size());
  for (const BinaryMask& mask : masks) {
    ws.sensing_rows.push_back(sensing_vector(mask.as_vector(), dict));
  }
  ws.records.resize(scene.channels);
  for (int c = 0; c < scene.channels; ++c) {
    std::vector<DenseVector> patches = extract_patches(scene, grid, c);
    NoiseModel channel_noise{noise.sigma, rng::derive_seed(noise.seed, c)};
    ws.records[c] = fpa_stream(patches, masks, channel_noise);
    for (DenseVector& z : patches) ws.measured.push_back(std::move(z));
  }
  return ws;
}

}  // namespace

ReconstructResult reconstruct_online(const ImagePlane& scene, const PatchGrid& grid,
                                     const Dictionary& dict, std::span<const BinaryMask> masks,
                                     const NoiseModel& noise, const ReconstructOptions& options,
                                     const ImagePlane* metric_reference) {
  options.params.validate();
  if (options.eval_stride < 1) throw DataError("reconstruct_online: eval_stride must be >= 1");
  const ImagePlane& reference = metric_reference ? *metric_reference : scene;
  if (!reference.same_shape(scene)) {
    throw DimensionError("reconstruct_online: metric reference does not match scene");
  }

  PatchWorkspace ws = prepare_stream(scene, grid, dict, masks, noise);
  const std::size_t m = masks.size();
  const std::size_t k = ws.patch_count;
  const std::size_t unit_count = k * scene.channels;

  // Block boundaries where workers synchronize: evaluation points, snapshot
  // points, the fixed-count stop step, and the final step.
  std::set<std::uint64_t> boundaries;
  std::set<std::uint64_t> eval_points;
  for (std::uint64_t t = options.eval_stride; t <= m; t += options.eval_stride) {
    eval_points.insert(t);
  }
  eval_points.insert(m);
  if (options.stop.mode == StopMode::kFixedCount) {
    const auto fixed_t = static_cast<std::uint64_t>(
        std::clamp(options.stop.threshold, 1.0, static_cast<double>(m)));
    eval_points.insert(fixed_t);
  }
  std::set<std::uint64_t> snapshot_points;
  for (int pct : options.snapshot_pcts) {
    const auto t = static_cast<std::uint64_t>(std::clamp(
        std::lround(static_cast<double>(pct) / 100.0 * static_cast<double>(m)), 1L,
        static_cast<long>(m)));
    snapshot_points.insert(t);
  }
  boundaries.insert(eval_points.begin(), eval_points.end());
  boundaries.insert(snapshot_points.begin(), snapshot_points.end());

  std::vector<OrlsState> states(unit_count);
  for (OrlsState& s : states) s = orls_init(grid.patch_dim(), options.params);

  ReconstructResult result;
  result.image = ImagePlane(scene.width, scene.height, scene.channels, scene.peak);

  auto assemble_current = [&](ImagePlane& out) {
    std::vector<DenseVector> recon(k);
    for (int c = 0; c < scene.channels; ++c) {
      for (std::size_t p = 0; p < k; ++p) {
        recon[p] = dict.synthesize(states[static_cast<std::size_t>(c) * k + p].estimate);
      }
      assemble_into(out, c, recon, grid);
    }
  };

  std::vector<DenseVector> prev_estimates(unit_count, DenseVector(grid.patch_dim()));
  std::vector<double> estimate_changes;
  std::vector<std::uint64_t> unit_not_converged(unit_count, 0);
  std::uint64_t t_done = 0;
  std::size_t steps_consumed = 0;  // per-unit history entries already folded into records

  for (std::uint64_t t_block : boundaries) {
    // Advance every (channel, patch) unit through steps (t_done, t_block].
    parallel_for(unit_count, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t unit = begin; unit < end; ++unit) {
        const std::size_t c = unit / k;
        const std::size_t p = unit % k;
        OrlsState state = std::move(states[unit]);
        for (std::uint64_t t = t_done + 1; t <= t_block; ++t) {
          MeasurementEvent event;
          event.a = ws.sensing_rows[t - 1];
          event.y = ws.records[c][(t - 1) * k + p].y;
          event.t = t;
          state = orls_step(std::move(state), event, options.params);
          if (!state.last_cg_converged) ++unit_not_converged[unit];
        }
        states[unit] = std::move(state);
      }
    });
    t_done = t_block;

    if (snapshot_points.contains(t_block)) {
      Snapshot snap;
      snap.t = t_block;
      snap.pct = static_cast<int>(std::lround(100.0 * static_cast<double>(t_block) /
                                              static_cast<double>(m)));
      snap.image = ImagePlane(scene.width, scene.height, scene.channels, scene.peak);
      assemble_current(snap.image);
      result.snapshots.push_back(std::move(snap));
    }

    if (eval_points.contains(t_block)) {
      assemble_current(result.image);

      // Every unit's history has exactly t_done entries here.
      std::uint64_t iters_block = 0;
      for (const OrlsState& s : states) {
        for (std::size_t i = steps_consumed; i < s.cg_iterations_history.size(); ++i) {
          iters_block += s.cg_iterations_history[i];
        }
      }
      steps_consumed = t_done;

      MetricsRecord record;
      record.t = t_block;
      record.pct_measurements = 100.0 * static_cast<double>(t_block) / static_cast<double>(m);
      record.psnr_db = psnr(reference, result.image);
      record.ssim = ssim(reference, result.image);
      record.cg_iters_total = iters_block;
      result.trajectory.records.push_back(record);

      double diff_sq = 0.0;
      double prev_sq = 0.0;
      for (std::size_t unit = 0; unit < unit_count; ++unit) {
        const DenseVector& now = states[unit].estimate;
        const DenseVector& prev = prev_estimates[unit];
        for (std::size_t i = 0; i < now.dim(); ++i) {
          const double d = now[i] - prev[i];
          diff_sq += d * d;
          prev_sq += prev[i] * prev[i];
        }
        prev_estimates[unit] = now;
      }
      estimate_changes.push_back(std::sqrt(diff_sq) / (1.0 + std::sqrt(prev_sq)));

      if (should_stop(options.stop, result.trajectory, estimate_changes)) break;
    }
  }

  for (std::uint64_t n : unit_not_converged) result.steps_not_converged += n;
  return result;
}

ImagePlane reconstruct_batch(const ImagePlane& scene, const PatchGrid& grid,
                             const Dictionary& dict, std::span<const BinaryMask> masks,
                             const NoiseModel& noise, const BatchOptions& options) {
  options.params.validate();
  if (options.n_outer < 1) throw DataError("reconstruct_batch: n_outer must be >= 1");

  PatchWorkspace ws = prepare_stream(scene, grid, dict, masks, noise);
  const std::size_t m = masks.size();
  const std::size_t k = ws.patch_count;
  const std::size_t unit_count = k * scene.channels;

  std::vector<DenseVector> estimates(unit_count);
  parallel_for(unit_count, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t unit = begin; unit < end; ++unit) {
      const std::size_t c = unit / k;
      const std::size_t p = unit % k;
      DenseVector y(m);
      for (std::size_t step = 0; step < m; ++step) y[step] = ws.records[c][step * k + p].y;
      estimates[unit] =
          irls_batch(ws.sensing_rows, y, grid.patch_dim(), options.params, options.n_outer);
    }
  });

  ImagePlane image(scene.width, scene.height, scene.channels, scene.peak);
  std::vector<DenseVector> recon(k);
  for (int c = 0; c < scene.channels; ++c) {
    for (std::size_t p = 0; p < k; ++p) {
      recon[p] = dict.synthesize(estimates[static_cast<std::size_t>(c) * k + p]);
    }
    assemble_into(image, c, recon, grid);
  }
  return image;
}

}  // namespace orls

// Command-line front end: mask generation, simulated acquisition with online
// or batch reconstruction, and image quality metrics.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "orls/image.hpp"
#include "orls/imaging.hpp"
#include "orls/metrics.hpp"
#include "orls/rng.hpp"
#include "orls/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

orls::StopRule parse_stop_rule(const std::string& text) {
  // fixed:<count> | plateau:<threshold>:<patience> | psnr:<db>
  const auto bad = [&]() {
    throw CLI::ValidationError("--stop", "expected fixed:<count>, plateau:<thr>:<patience>, "
                                         "or psnr:<db>, got '" + text + "'");
  };
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  try {
    orls::StopRule rule;
    if (parts.size() == 2 && parts[0] == "fixed") {
      rule.mode = orls::StopMode::kFixedCount;
      rule.threshold = std::stod(parts[1]);
      if (rule.threshold < 1) bad();
    } else if (parts.size() == 3 && parts[0] == "plateau") {
      rule.mode = orls::StopMode::kEstimatePlateau;
      rule.threshold = std::stod(parts[1]);
      rule.patience = std::stoi(parts[2]);
      if (rule.patience < 1) bad();
    } else if (parts.size() == 2 && parts[0] == "psnr") {
      rule.mode = orls::StopMode::kMetricThreshold;
      rule.threshold = std::stod(parts[1]);
    } else {
      bad();
    }
    return rule;
  } catch (const std::invalid_argument&) {
    bad();
  } catch (const std::out_of_range&) {
    bad();
  }
  return {};
}

std::vector<int> parse_pct_list(const std::string& text) {
  std::vector<int> pcts;
  if (text.empty() || text == "none") return pcts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string token = text.substr(pos, next == std::string::npos ? next : next - pos);
    try {
      const int pct = std::stoi(token);
      if (pct < 1 || pct > 100) throw std::invalid_argument(token);
      pcts.push_back(pct);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--snapshots", "expected comma-separated percentages in "
                                                "[1,100], got '" + text + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return pcts;
}

void write_manifest(const fs::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw orls::DataError("cannot write manifest " + path.string());
  for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
}

// Shared flags for the two reconstruction commands.
struct AcquisitionConfig {
  std::string scene_path;
  std::string masks_path;
  double lambda = 1.0;
  double delta = 1e-6;
  double scene_sigma = 0.0;
  double scene_psnr = 0.0;
  bool scene_psnr_set = false;
  double meas_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  int threads = 1;
  bool crop = false;
  std::string out_dir;
};

struct LoadedScene {
  orls::ImagePlane clean;     // metric reference
  orls::ImagePlane measured;  // possibly scene-noise corrupted
  orls::MaskFile mask_file;
  orls::PatchGrid grid;
  orls::Dictionary dict = orls::Dictionary::dct2d(1);
  orls::NoiseModel measurement_noise;
  double scene_sigma = 0.0;
};

LoadedScene load_acquisition(const AcquisitionConfig& cfg) {
  LoadedScene ctx;
  ctx.mask_file = orls::read_mask_file(cfg.masks_path);
  orls::ImagePlane scene = orls::load_image(cfg.scene_path);
  const int side = static_cast<int>(ctx.mask_file.side);
  if (cfg.crop) scene = orls::crop_to_multiple(scene, side);
  ctx.grid = orls::make_patch_grid(scene, side);
  ctx.dict = orls::Dictionary::dct2d(ctx.mask_file.side);

  ctx.scene_sigma = cfg.scene_psnr_set
                        ? orls::sigma_for_target_psnr(scene.peak, cfg.scene_psnr)
                        : cfg.scene_sigma;
  ctx.clean = scene;
  // Scene noise and measurement noise come from independent child streams of
  // --noise-seed: child 0 corrupts the scene, child 1 feeds the measurements.
  ctx.measured =
      ctx.scene_sigma > 0.0
          ? orls::add_gaussian_noise(scene, ctx.scene_sigma, orls::rng::derive_seed(cfg.noise_seed, 0))
          : std::move(scene);
  ctx.measurement_noise = {cfg.meas_sigma, orls::rng::derive_seed(cfg.noise_seed, 1)};
  return ctx;
}

void append_common_manifest(std::vector<std::pair<std::string, std::string>>& kv,
                            const AcquisitionConfig& cfg, const LoadedScene& ctx) {
  kv.emplace_back("scene", cfg.scene_path);
  kv.emplace_back("masks", cfg.masks_path);
  kv.emplace_back("mask_side", std::to_string(ctx.mask_file.side));
  kv.emplace_back("mask_count", std::to_string(ctx.mask_file.masks.size()));
  kv.emplace_back("mask_seed", std::to_string(ctx.mask_file.seed));
  kv.emplace_back("patch_side", std::to_string(ctx.mask_file.side));
  kv.emplace_back("lambda", fmt_double(cfg.lambda));
  kv.emplace_back("delta", fmt_double(cfg.delta));
  kv.emplace_back("scene_sigma", fmt_double(ctx.scene_sigma));
  kv.emplace_back("scene_psnr_target", cfg.scene_psnr_set ? fmt_double(cfg.scene_psnr) : "");
  kv.emplace_back("meas_sigma", fmt_double(cfg.meas_sigma));
  kv.emplace_back("noise_seed", std::to_string(cfg.noise_seed));
  kv.emplace_back("crop", cfg.crop ? "1" : "0");
  kv.emplace_back("threads", std::to_string(cfg.threads));
  kv.emplace_back("out_dir", cfg.out_dir);
}

fs::path image_out_path(const fs::path& dir, const std::string& stem, int channels) {
  return dir / (stem + (channels == 1 ? ".pgm" : ".ppm"));
}

int run_reconstruct(const AcquisitionConfig& cfg, double cg_eps, std::size_t cg_max_iter,
                    bool cold_start, const std::string& stop_text, int eval_stride,
                    const std::string& snapshots_text) {
  LoadedScene ctx = load_acquisition(cfg);

  orls::ReconstructOptions options;
  options.params.lambda = cfg.lambda;
  options.params.delta = cfg.delta;
  options.params.cg_eps = cg_eps;
  options.params.cg_max_iter = cg_max_iter;
  options.params.cg_warm_start = !cold_start;
  options.stop = parse_stop_rule(stop_text);
  options.eval_stride = eval_stride;
  options.threads = cfg.threads;
  options.snapshot_pcts = parse_pct_list(snapshots_text);

  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);

  orls::ReconstructResult result =
      orls::reconstruct_online(ctx.measured, ctx.grid, ctx.dict, ctx.mask_file.masks,
                               ctx.measurement_noise, options, &ctx.clean);

  if (result.steps_not_converged > 0) {
    std::cerr << "warning: CG hit its iteration cap on " << result.steps_not_converged
              << " patch-steps; results may be degraded\n";
  }

  const fs::path recon_path = image_out_path(out_dir, "reconstruction", ctx.clean.channels);
  orls::save_image(result.image, recon_path);
  orls::write_trajectory_csv(result.trajectory, out_dir / "trajectory.csv");
  for (const orls::Snapshot& snap : result.snapshots) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "snapshot_%03d", snap.pct);
    orls::save_image(snap.image, image_out_path(out_dir, stem, ctx.clean.channels));
  }

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("tool_version", orls::kVersion);
  kv.emplace_back("command", "reconstruct");
  append_common_manifest(kv, cfg, ctx);
  kv.emplace_back("cg_eps", fmt_double(cg_eps));
  kv.emplace_back("cg_max_iter", std::to_string(cg_max_iter));
  kv.emplace_back("cg_warm_start", cold_start ? "0" : "1");
  kv.emplace_back("stop", stop_text);
  kv.emplace_back("eval_stride", std::to_string(eval_stride));
  kv.emplace_back("snapshots", snapshots_text);
  kv.emplace_back("reconstruction", recon_path.string());
  write_manifest(out_dir / "manifest.txt", kv);

  const orls::MetricsRecord& last = result.trajectory.records.back();
  std::cout << "final: t=" << last.t << " psnr_db=" << fmt_metric(last.psnr_db)
            << " ssim=" << fmt_metric(last.ssim) << "\n";
  return kExitOk;
}

int run_batch(const AcquisitionConfig& cfg, std::size_t n_outer) {
  LoadedScene ctx = load_acquisition(cfg);

  orls::BatchOptions options;
  options.params.lambda = cfg.lambda;
  options.params.delta = cfg.delta;
  options.n_outer = n_outer;
  options.threads = cfg.threads;

  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);

  orls::ImagePlane image = orls::reconstruct_batch(ctx.measured, ctx.grid, ctx.dict,
                                                   ctx.mask_file.masks, ctx.measurement_noise,
                                                   options);
  const fs::path recon_path = image_out_path(out_dir, "reconstruction", ctx.clean.channels);
  orls::save_image(image, recon_path);

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("tool_version", orls::kVersion);
  kv.emplace_back("command", "batch");
  append_common_manifest(kv, cfg, ctx);
  kv.emplace_back("outer", std::to_string(n_outer));
  kv.emplace_back("reconstruction", recon_path.string());
  write_manifest(out_dir / "manifest.txt", kv);

  std::cout << "final: psnr_db=" << fmt_metric(orls::psnr(ctx.clean, image))
            << " ssim=" << fmt_metric(orls::ssim(ctx.clean, image)) << "\n";
  return kExitOk;
}

int run_metrics(const std::string& reference_path, const std::string& test_path) {
  const orls::ImagePlane reference = orls::load_image(reference_path);
  const orls::ImagePlane test = orls::load_image(test_path);
  std::cout << fmt_metric(orls::psnr(reference, test)) << ","
            << fmt_metric(orls::ssim(reference, test)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online reweighted least squares for patch-based compressive imaging"};
  app.require_subcommand(1);

  // masks
  auto* masks_cmd = app.add_subcommand("masks", "Generate a random binary mask file");
  std::size_t mask_side = 8, mask_count = 0;
  std::uint64_t mask_seed = 0;
  std::string mask_out;
  masks_cmd->add_option("--side", mask_side, "Mask side length")->check(CLI::PositiveNumber);
  masks_cmd->add_option("--count", mask_count, "Number of masks")
      ->required()
      ->check(CLI::PositiveNumber);
  masks_cmd->add_option("--seed", mask_seed, "Master seed");
  masks_cmd->add_option("--out", mask_out, "Output mask file")->required();

  // shared acquisition flags
  const auto add_acquisition_flags = [](CLI::App* cmd, AcquisitionConfig& cfg) {
    cmd->add_option("--scene", cfg.scene_path, "Scene image (PGM/PPM)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--masks", cfg.masks_path, "Mask file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--lambda", cfg.lambda, "Regularization weight")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--delta", cfg.delta, "Weight stabilizer")->check(CLI::PositiveNumber);
    auto* sigma_opt =
        cmd->add_option("--sigma", cfg.scene_sigma, "Scene noise standard deviation");
    cmd->add_option("--scene-psnr", cfg.scene_psnr,
                    "Corrupt the scene to this PSNR (dB) before measuring")
        ->excludes(sigma_opt)
        ->each([&cfg](const std::string&) { cfg.scene_psnr_set = true; });
    cmd->add_option("--meas-sigma", cfg.meas_sigma,
                    "Measurement noise standard deviation (per scalar sample)");
    cmd->add_option("--noise-seed", cfg.noise_seed, "Noise seed");
    cmd->add_option("--threads", cfg.threads, "Patch worker count")->check(CLI::PositiveNumber);
    cmd->add_flag("--crop", cfg.crop, "Crop the scene to a multiple of the patch side");
    cmd->add_option("--out-dir", cfg.out_dir, "Output directory")->required();
  };

  // reconstruct
  auto* rec_cmd = app.add_subcommand("reconstruct", "Online ORLS reconstruction");
  AcquisitionConfig rec_cfg;
  double rec_cg_eps = 1e-5;
  std::size_t rec_cg_max_iter = 0;
  bool rec_cold_start = false;
  std::string rec_stop = "plateau:1e-4:3";
  int rec_stride = 1;
  std::string rec_snapshots = "25,75,100";
  add_acquisition_flags(rec_cmd, rec_cfg);
  rec_cmd->add_option("--cg-eps", rec_cg_eps, "CG relative residual tolerance")
      ->check(CLI::PositiveNumber);
  rec_cmd->add_option("--cg-max-iter", rec_cg_max_iter, "CG iteration cap (0 = 4n)");
  rec_cmd->add_flag("--cold-start", rec_cold_start, "Initialize CG at zero instead of the "
                                                    "previous estimate");
  rec_cmd->add_option("--stop", rec_stop,
                      "Stop rule: fixed:<count> | plateau:<thr>:<patience> | psnr:<db>");
  rec_cmd->add_option("--eval-stride", rec_stride, "Measurements between metric evaluations")
      ->check(CLI::PositiveNumber);
  rec_cmd->add_option("--snapshots", rec_snapshots,
                      "Comma-separated snapshot percentages, or 'none'");

  // batch
  auto* batch_cmd = app.add_subcommand("batch", "Batch IRLS reconstruction");
  AcquisitionConfig batch_cfg;
  std::size_t batch_outer = 30;
  add_acquisition_flags(batch_cmd, batch_cfg);
  batch_cmd->add_option("--outer", batch_outer, "IRLS outer iterations")
      ->check(CLI::PositiveNumber);

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Print psnr_db,ssim for an image pair");
  std::string metrics_reference, metrics_test;
  metrics_cmd->add_option("--reference", metrics_reference, "Reference image")
      ->required()
      ->check(CLI::ExistingFile);
  metrics_cmd->add_option("--test", metrics_test, "Test image")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (masks_cmd->parsed()) {
      const std::vector<orls::BinaryMask> masks =
          orls::make_mask_sequence(mask_side, mask_count, mask_seed);
      orls::write_mask_file(mask_out, masks, mask_side, mask_seed);
      std::cout << "wrote " << mask_count << " " << mask_side << "x" << mask_side
                << " masks to " << mask_out << "\n";
      return kExitOk;
    }
    if (rec_cmd->parsed()) {
      return run_reconstruct(rec_cfg, rec_cg_eps, rec_cg_max_iter, rec_cold_start, rec_stop,
                             rec_stride, rec_snapshots);
    }
    if (batch_cmd->parsed()) return run_batch(batch_cfg, batch_outer);
    if (metrics_cmd->parsed()) return run_metrics(metrics_reference, metrics_test);
  } catch (const orls::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const orls::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const orls::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

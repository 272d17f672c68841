#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gencam/camera.hpp"
#include "gencam/image.hpp"

namespace gencam {

inline constexpr int kRepePointCount = 32400;

// Mean reprojection error in pixels over 32,400 deterministic equal-area
// spiral bearings on the cap within 90 degrees of gt's optical axis.
// Bearings beyond a camera's valid cone project at the boundary radius at
// their azimuth. Pan is equalized (taken from gt) before projecting.
double repe(const CameraParameters& gt, const CameraParameters& pred);

// 10 log10(255^2 / MSE) over all channels; +infinity when the images are
// identical. Throws std::invalid_argument on dimension mismatch.
double psnr(const Image& a, const Image& b);

// Single-scale SSIM on the grayscale conversion: 11x11 Gaussian window,
// sigma 1.5, K1 = 0.01, K2 = 0.03, L = 255, mean over the valid (fully
// windowed) map.
double ssim(const Image& a, const Image& b);

struct ManifestEntry {
    std::string id;
    CameraParameters params;
};

struct EvaluationReport {
    double mean_abs_tilt_deg = 0.0;
    double mean_abs_roll_deg = 0.0;
    double mean_abs_f_mm = 0.0;
    double mean_abs_k1 = 0.0;
    double repe_px = 0.0;
    std::optional<double> psnr_db;
    std::optional<double> ssim_value;
    int entry_count = 0;
};

// Aggregates per-parameter absolute errors and REPE over a manifest;
// PSNR/SSIM are averaged when image pairs are supplied (keyed by entry id).
// Throws std::runtime_error listing ids that have no prediction.
EvaluationReport evaluate_manifest(
    const std::vector<ManifestEntry>& manifest,
    const std::map<std::string, CameraParameters>& predictions,
    const std::map<std::string, std::pair<Image, Image>>* image_pairs = nullptr,
    int threads = 1);

}  // namespace gencam

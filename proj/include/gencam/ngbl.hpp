#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gencam/camera.hpp"

namespace gencam {

// The four trainable parameters of the generic model, in landscape order.
enum class LossParam { Tilt, Roll, Focal, K1 };

const char* loss_param_name(LossParam p);

// Affine maps between native units and the normalized [0, 1] training range.
// Normalized 0.5 is tilt 0, roll 0, f 10.5 mm, k1 1/12.
struct NormalizationSpec {
    static double tilt_deg_from_unit(double x) { return -90.0 + 180.0 * x; }
    static double roll_deg_from_unit(double x) { return -90.0 + 180.0 * x; }
    static double focal_mm_from_unit(double x) { return 6.0 + 9.0 * x; }
    static double k1_from_unit(double x) { return -1.0 / 6.0 + 0.5 * x; }

    static double unit_from_tilt_deg(double v) { return (v + 90.0) / 180.0; }
    static double unit_from_roll_deg(double v) { return (v + 90.0) / 180.0; }
    static double unit_from_focal_mm(double v) { return (v - 6.0) / 9.0; }
    static double unit_from_k1(double v) { return (v + 1.0 / 6.0) / 0.5; }
};

struct LossWeights {
    double w_theta = 0.0, w_psi = 0.0, w_f = 0.0, w_k1 = 0.0;
    double s_theta = 0.0, s_psi = 0.0, s_f = 0.0, s_k1 = 0.0;
};

// Non-grid bearing loss: mean Euclidean distance between ground-truth unit
// bearings and the bearings recovered by projecting with gt and lifting with
// pred. Bearings are sampled with incident angle uniform in
// [0, eta_valid(gt)] and uniform azimuth, deterministically from the seed.
// Out-of-range radii clamp to pred's valid limit, so the loss is total and
// bounded by 2; ngbl_loss(gt, gt) == 0 for every camera and seed.
// Requires equal pan (pan is provided, not trained).
double ngbl_loss(const CameraParameters& gt, const CameraParameters& pred, int n,
                 std::uint64_t seed);

struct LandscapePoint {
    double normalized_value = 0.0;
    double loss = 0.0;
};

// Loss landscape of one parameter: ground truth pinned at normalized 0.5
// (pan 0, eta_max 90 degrees), the chosen parameter swept over a uniform
// grid in [0, 1]. The sweep evaluates the loss with the closed-form lift
// used by the published weight analysis (see ngbl.cpp); it matches
// ngbl_loss everywhere the lifted radius stays in pred's invertible range.
std::vector<LandscapePoint> landscape(LossParam param, int grid_points, int n,
                                      std::uint64_t seed, int threads = 1);

// Harmonic joint weights: S_alpha by composite trapezoid over each landscape,
// w_alpha proportional to 1/S_alpha, normalized to sum to one.
LossWeights derive_weights(int grid_points, int n, std::uint64_t seed, int threads = 1);

double joint_loss(const std::array<double, 4>& losses, const LossWeights& weights);

}  // namespace gencam

#include "gencam/ngbl.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "gencam/kernels.hpp"
#include "gencam/rng.hpp"

namespace gencam {

namespace {

constexpr std::uint64_t kStreamEta = 1;
constexpr std::uint64_t kStreamAzimuth = 2;

struct SampleSet {
    std::vector<double> eta;
    std::vector<double> azimuth;
    std::vector<double> world;  // packed xyz ground-truth bearings
};

// Incident angle uniform in [0, cap], azimuth uniform; sample i depends only
// on (seed, i), so any parallel schedule reproduces the same set.
SampleSet sample_bearings(const Mat3& gt_rot, double cap, int n, std::uint64_t seed) {
    SampleSet s;
    s.eta.resize(n);
    s.azimuth.resize(n);
    s.world.resize(3 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double eta = rng::uniform(seed, kStreamEta, i) * cap;
        const double az = 2.0 * kPi * rng::uniform(seed, kStreamAzimuth, i);
        s.eta[i] = eta;
        s.azimuth[i] = az;
        const double se = std::sin(eta);
        const Vec3 ray{se * std::cos(az), se * std::sin(az), std::cos(eta)};
        const Vec3 w = gt_rot.tmul(ray);
        s.world[3 * i] = w.x;
        s.world[3 * i + 1] = w.y;
        s.world[3 * i + 2] = w.z;
    }
    return s;
}

enum class LiftRule {
    Strict,    // monotone branch, radius clamped into range (the public loss)
    Landscape  // closed-form branch rules of the published weight analysis
};

// Shared loss pipeline: gt projects the sampled bearings, pred lifts the
// resulting radii, distances are averaged over all n samples.
double loss_impl(const CameraParameters& gt, const CameraParameters& pred, int n,
                 std::uint64_t seed, LiftRule rule) {
    if (n < 1) throw std::invalid_argument("ngbl_loss: sample count must be >= 1");
    if (std::abs(gt.pan_deg - pred.pan_deg) > 1e-9)
        throw std::invalid_argument("ngbl_loss: pan must be equal between gt and pred");

    // An identical camera inverts its own projection exactly; skip the
    // pipeline so the result is 0 rather than accumulated roundoff.
    if (gt.pan_deg == pred.pan_deg && gt.tilt_deg == pred.tilt_deg &&
        gt.roll_deg == pred.roll_deg && gt.focal_mm == pred.focal_mm && gt.k1 == pred.k1 &&
        gt.max_incident_deg == pred.max_incident_deg)
        return 0.0;

    const Mat3 gt_rot = rotation_matrix(gt.pan_deg, gt.tilt_deg, gt.roll_deg);
    const Mat3 pr_rot = rotation_matrix(pred.pan_deg, pred.tilt_deg, pred.roll_deg);
    const double cap = gt.eta_valid_rad();
    const SampleSet s = sample_bearings(gt_rot, cap, n, seed);

    const ProjectionModel gt_model = gt.model();
    const ProjectionModel pr_model = pred.model();
    const double pr_valid = eta_valid(pr_model, deg2rad(pred.max_incident_deg));
    const double f = pr_model.focal_mm;
    const double k1 = pr_model.k1;
    const bool k1_negative = k1 < -cubic::kLinearK1Epsilon;
    const double fold = k1_negative ? cubic::fold_g(k1) : 0.0;
    const double strict_gmax = radial_distance(pr_model, pr_valid);

    std::vector<double> lifted(3 * static_cast<std::size_t>(n));
    std::vector<double> truth(3 * static_cast<std::size_t>(n));
    std::size_t kept = 0;
    for (int i = 0; i < n; ++i) {
        const double gamma = radial_distance(gt_model, s.eta[i]);
        double eta_l;
        bool keep = true;
        if (rule == LiftRule::Strict) {
            const double clamped = std::min(gamma, strict_gmax);
            eta_l = std::min(incident_angle(pr_model, clamped), pr_valid);
        } else {
            const double g = gamma / f;
            if (std::abs(k1) < cubic::kLinearK1Epsilon) {
                eta_l = g;
                keep = eta_l <= pr_valid + 1e-12;
            } else if (k1 > 0.0) {
                eta_l = cubic::single_real_root(k1, g);
                keep = eta_l <= pr_valid + 1e-12;
            } else if (g <= fold) {
                eta_l = cubic::principal_trig_root(k1, g);
            } else {
                eta_l = cubic::single_real_root(k1, g);  // negative beyond the fold
                keep = eta_l <= pr_valid + 1e-12;
            }
        }
        if (!keep) continue;
        const double se = std::sin(eta_l);
        const Vec3 ray{se * std::cos(s.azimuth[i]), se * std::sin(s.azimuth[i]), std::cos(eta_l)};
        const Vec3 w = pr_rot.tmul(ray);
        lifted[3 * kept] = w.x;
        lifted[3 * kept + 1] = w.y;
        lifted[3 * kept + 2] = w.z;
        truth[3 * kept] = s.world[3 * i];
        truth[3 * kept + 1] = s.world[3 * i + 1];
        truth[3 * kept + 2] = s.world[3 * i + 2];
        ++kept;
    }
    const double sum = kernels::sum_point_dist3(lifted.data(), truth.data(), kept);
    return sum / n;
}

CameraParameters landscape_ground_truth() {
    CameraParameters cam;
    cam.pan_deg = 0.0;
    cam.tilt_deg = NormalizationSpec::tilt_deg_from_unit(0.5);
    cam.roll_deg = NormalizationSpec::roll_deg_from_unit(0.5);
    cam.focal_mm = NormalizationSpec::focal_mm_from_unit(0.5);
    cam.k1 = NormalizationSpec::k1_from_unit(0.5);
    cam.max_incident_deg = 90.0;  // midpoint of the untrained range
    cam.image_height_px = 224;
    cam.image_width_px = 224;
    return cam;
}

CameraParameters apply_param(CameraParameters cam, LossParam param, double x) {
    switch (param) {
        case LossParam::Tilt: cam.tilt_deg = NormalizationSpec::tilt_deg_from_unit(x); break;
        case LossParam::Roll: cam.roll_deg = NormalizationSpec::roll_deg_from_unit(x); break;
        case LossParam::Focal: cam.focal_mm = NormalizationSpec::focal_mm_from_unit(x); break;
        case LossParam::K1: cam.k1 = NormalizationSpec::k1_from_unit(x); break;
    }
    return cam;
}

void parallel_grid(int grid_points, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1) {
        for (int i = 0; i < grid_points; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < grid_points; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

const char* loss_param_name(LossParam p) {
    switch (p) {
        case LossParam::Tilt: return "theta";
        case LossParam::Roll: return "psi";
        case LossParam::Focal: return "f";
        case LossParam::K1: return "k1";
    }
    return "unknown";
}

double ngbl_loss(const CameraParameters& gt, const CameraParameters& pred, int n,
                 std::uint64_t seed) {
    return loss_impl(gt, pred, n, seed, LiftRule::Strict);
}

std::vector<LandscapePoint> landscape(LossParam param, int grid_points, int n,
                                      std::uint64_t seed, int threads) {
    if (grid_points < 11) throw std::invalid_argument("landscape: grid_points must be >= 11");
    const CameraParameters gt = landscape_ground_truth();
    std::vector<LandscapePoint> out(grid_points);
    parallel_grid(grid_points, threads, [&](int i) {
        const double x = static_cast<double>(i) / (grid_points - 1);
        const CameraParameters pred = apply_param(gt, param, x);
        out[i] = {x, loss_impl(gt, pred, n, seed, LiftRule::Landscape)};
    });
    return out;
}

LossWeights derive_weights(int grid_points, int n, std::uint64_t seed, int threads) {
    if (grid_points < 101) throw std::invalid_argument("derive_weights: grid_points must be >= 101");
    if (n < 10000) throw std::invalid_argument("derive_weights: sample count must be >= 10000");

    const LossParam params[4] = {LossParam::Tilt, LossParam::Roll, LossParam::Focal, LossParam::K1};
    double s[4];
    for (int p = 0; p < 4; ++p) {
        const auto curve = landscape(params[p], grid_points, n, seed, threads);
        double area = 0.0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            const double dx = curve[i].normalized_value - curve[i - 1].normalized_value;
            area += 0.5 * (curve[i].loss + curve[i - 1].loss) * dx;
        }
        if (area <= 0.0)
            throw std::runtime_error("derive_weights: degenerate zero-area landscape");
        s[p] = area;
    }
    const double inv[4] = {1.0 / s[0], 1.0 / s[1], 1.0 / s[2], 1.0 / s[3]};
    const double total = inv[0] + inv[1] + inv[2] + inv[3];
    LossWeights w;
    w.w_theta = inv[0] / total;
    w.w_psi = inv[1] / total;
    w.w_f = inv[2] / total;
    w.w_k1 = inv[3] / total;
    w.s_theta = s[0];
    w.s_psi = s[1];
    w.s_f = s[2];
    w.s_k1 = s[3];
    return w;
}

double joint_loss(const std::array<double, 4>& losses, const LossWeights& weights) {
    for (double l : losses)
        if (l < 0.0) throw std::invalid_argument("joint_loss: loss values must be nonnegative");
    return weights.w_theta * losses[0] + weights.w_psi * losses[1] + weights.w_f * losses[2] +
           weights.w_k1 * losses[3];
}

}  // namespace gencam

#include "gencam/remap.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gencam/kernels.hpp"

namespace gencam {

void PerspectiveSpec::validate() const {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("PerspectiveSpec: dimensions must be positive");
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
        throw std::invalid_argument("PerspectiveSpec: horizontal FOV must be in (0, 180)");
}

double PerspectiveSpec::focal_px() const {
    return (width / 2.0) / std::tan(deg2rad(hfov_deg) / 2.0);
}

namespace {

// Shared inverse-map remapper: each output pixel's pinhole ray is rotated by
// `ray_rot` into the fisheye camera frame and looked up through the radial
// model. `ray_rot` is the exact identity for undistortion.
Image remap_pinhole(const Image& image, const CameraParameters& params,
                    const PerspectiveSpec& spec, const Mat3& ray_rot, int threads) {
    spec.validate();
    if (image.width != params.image_width_px || image.height != params.image_height_px)
        throw std::invalid_argument("remap: image dimensions do not match the camera parameters");

    Image out(spec.width, spec.height);
    const double fpx = spec.focal_px();
    const double cx = spec.width / 2.0;
    const double cy = spec.height / 2.0;
    const ProjectionModel model = params.model();
    const double eta_lim = params.eta_valid_rad();
    const double pitch = params.pixel_pitch_mm();
    const double cu = params.principal_u();
    const double cv = params.principal_v();

    auto remap_rows = [&](int row_begin, int row_end) {
        const std::size_t count = static_cast<std::size_t>(row_end - row_begin) * spec.width;
        std::vector<float> xs(count), ys(count);
        std::vector<std::uint8_t> valid(count);
        std::size_t idx = 0;
        for (int r = row_begin; r < row_end; ++r) {
            for (int c = 0; c < spec.width; ++c, ++idx) {
                const Vec3 pin{((c + 0.5) - cx) / fpx, ((r + 0.5) - cy) / fpx, 1.0};
                const Vec3 d = ray_rot * pin;
                const double planar = std::hypot(d.x, d.y);
                const double eta = std::atan2(planar, d.z);
                if (!(eta <= eta_lim)) {
                    valid[idx] = 0;
                    xs[idx] = 0.0f;
                    ys[idx] = 0.0f;
                    continue;
                }
                const double r_px = radial_distance(model, eta) / pitch;
                const double alpha = std::atan2(d.y, d.x);
                valid[idx] = 1;
                xs[idx] = static_cast<float>(cu + r_px * std::cos(alpha));
                ys[idx] = static_cast<float>(cv + r_px * std::sin(alpha));
            }
        }
        kernels::bilinear_rgb8(image.data.data(), image.width, image.height, xs.data(), ys.data(),
                               valid.data(), count, /*wrap_x=*/false, out.pixel(row_begin, 0));
    };

    if (threads <= 1) {
        remap_rows(0, spec.height);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (spec.height + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(spec.height, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(remap_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace

Image undistort(const Image& image, const CameraParameters& params, const PerspectiveSpec& spec,
                int threads) {
    return remap_pinhole(image, params, spec, Mat3::identity(), threads);
}

Image recover(const Image& image, const CameraParameters& params, const PerspectiveSpec& spec,
              int threads) {
    // Relative rotation from the gravity-aligned virtual camera to the real
    // one; pan cancels algebraically, so it is built from tilt and roll only
    // (identity bit-for-bit when both are zero).
    const double tilt = deg2rad(params.tilt_deg);
    const double roll = deg2rad(params.roll_deg);
    const double ct = std::cos(-tilt), st = std::sin(-tilt);
    const Mat3 tilt_m{{1, 0, 0, 0, ct, -st, 0, st, ct}};
    const double cr = std::cos(roll), sr = std::sin(roll);
    const Mat3 roll_m{{cr, -sr, 0, sr, cr, 0, 0, 0, 1}};
    return remap_pinhole(image, params, spec, roll_m * tilt_m, threads);
}

}  // namespace gencam

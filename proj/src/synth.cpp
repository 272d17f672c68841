#include "gencam/synth.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gencam/kernels.hpp"
#include "gencam/rng.hpp"

namespace gencam {

namespace rng {

double Sequence::next_normal() {
    // Box-Muller; u1 nudged away from zero so the log stays finite.
    const double u1 = std::max(next_uniform(), 1e-12);
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace rng

Panorama::Panorama(Image img) : raster(std::move(img)) {
    if (raster.width != 2 * raster.height || raster.height <= 0)
        throw std::invalid_argument("Panorama: width must be exactly twice the height");
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "test") return Split::Test;
    throw std::invalid_argument("split must be 'train' or 'test'");
}

const std::array<AspectChoice, 5>& aspect_table() {
    static const std::array<AspectChoice, 5> table{{{1.0, 0.09},
                                                    {5.0 / 4.0, 0.01},
                                                    {4.0 / 3.0, 0.66},
                                                    {3.0 / 2.0, 0.20},
                                                    {16.0 / 9.0, 0.04}}};
    return table;
}

namespace {

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

double draw_angle_mixture(rng::Sequence& rng, Split split) {
    if (split == Split::Test) return -90.0 + 180.0 * rng.next_uniform();
    if (rng.next_uniform() < 0.7) return clamp(15.0 * rng.next_normal(), -90.0, 90.0);
    return -90.0 + 180.0 * rng.next_uniform();
}

double draw_aspect(rng::Sequence& rng, Split split) {
    const auto& table = aspect_table();
    if (split == Split::Test) {
        const auto idx = static_cast<std::size_t>(rng.next_uniform() * table.size());
        return table[std::min(idx, table.size() - 1)].ratio;
    }
    const double u = rng.next_uniform();
    double cum = 0.0;
    for (const auto& c : table) {
        cum += c.probability;
        if (u < cum) return c.ratio;
    }
    return table.back().ratio;
}

}  // namespace

CameraParameters sample_parameters(Split split, std::uint64_t seed, std::uint64_t index,
                                   int image_height_px) {
    rng::Sequence rng(seed, index);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        CameraParameters cam;
        cam.image_height_px = image_height_px;
        cam.pan_deg = 360.0 * rng.next_uniform();
        if (cam.pan_deg >= 360.0) cam.pan_deg = 0.0;
        cam.tilt_deg = draw_angle_mixture(rng, split);
        cam.roll_deg = draw_angle_mixture(rng, split);
        const double aspect = draw_aspect(rng, split);
        cam.image_width_px = static_cast<int>(std::lround(image_height_px * aspect));
        cam.focal_mm = 6.0 + 9.0 * rng.next_uniform();
        cam.k1 = -1.0 / 6.0 + 0.5 * rng.next_uniform();
        cam.max_incident_deg = 84.0 + 12.0 * rng.next_uniform();
        // Image-circle constraint: diameter at least the image height.
        if (2.0 * cam.image_circle_radius_px() >= image_height_px) return cam;
    }
    throw std::runtime_error(
        "sample_parameters: image-circle constraint rejected 10000 consecutive draws");
}

Image render_patch(const Panorama& pano, const CameraParameters& params, int threads) {
    const int w = params.image_width_px;
    const int h = params.image_height_px;
    if (2.0 * params.image_circle_radius_px() < h)
        throw std::invalid_argument("render_patch: image circle smaller than the image height");

    Image out(w, h);
    const Mat3 rot = rotation_matrix(params.pan_deg, params.tilt_deg, params.roll_deg);
    const ProjectionModel model = params.model();
    const double pitch = params.pixel_pitch_mm();
    const double cu = params.principal_u();
    const double cv = params.principal_v();
    const double eta_lim = params.eta_valid_rad();
    const double gamma_max = radial_distance(model, eta_lim);
    const double pw = pano.width();
    const double ph = pano.height();

    auto render_rows = [&](int row_begin, int row_end) {
        const std::size_t count = static_cast<std::size_t>(row_end - row_begin) * w;
        std::vector<float> xs(count), ys(count);
        std::vector<std::uint8_t> valid(count);
        std::size_t idx = 0;
        for (int r = row_begin; r < row_end; ++r) {
            for (int c = 0; c < w; ++c, ++idx) {
                const double du = (c + 0.5) - cu;
                const double dv = (r + 0.5) - cv;
                const double gamma = std::hypot(du, dv) * pitch;
                if (gamma > gamma_max) {
                    valid[idx] = 0;
                    xs[idx] = 0.0f;
                    ys[idx] = 0.0f;
                    continue;
                }
                const double eta = std::min(incident_angle(model, gamma), eta_lim);
                const double alpha = std::atan2(dv, du);
                const double se = std::sin(eta);
                const Vec3 ray{se * std::cos(alpha), se * std::sin(alpha), std::cos(eta)};
                const Vec3 wdir = rot.tmul(ray);
                double lon = std::atan2(wdir.x, wdir.z);
                if (lon < 0.0) lon += 2.0 * kPi;
                const double lat = std::asin(clamp(-wdir.y, -1.0, 1.0));
                double px = lon / (2.0 * kPi) * pw;
                if (px >= pw) px -= pw;
                const double py = (kPi / 2.0 - lat) / kPi * ph;
                valid[idx] = 1;
                xs[idx] = static_cast<float>(px);
                ys[idx] = static_cast<float>(py);
            }
        }
        kernels::bilinear_rgb8(pano.raster.data.data(), pano.width(), pano.height(), xs.data(),
                               ys.data(), valid.data(), count, /*wrap_x=*/true,
                               out.pixel(row_begin, 0));
    };

    if (threads <= 1) {
        render_rows(0, h);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (h + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(h, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(render_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

PatchRecord make_patch(const Panorama& pano, Split split, std::uint64_t seed,
                       std::uint64_t index, int threads) {
    PatchRecord rec;
    rec.params = sample_parameters(split, seed, index);
    rec.image = render_patch(pano, rec.params, threads);
    rec.seed = seed;
    return rec;
}

}  // namespace gencam

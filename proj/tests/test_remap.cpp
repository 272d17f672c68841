#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "gencam/metrics.hpp"
#include "gencam/remap.hpp"
#include "gencam/synth.hpp"

using namespace gencam;

namespace {

Image smooth_panorama(int height) {
    Image img(2 * height, height);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < 2 * height; ++c) {
            std::uint8_t* p = img.pixel(r, c);
            const double u = static_cast<double>(c) / (2 * height);
            const double v = static_cast<double>(r) / height;
            p[0] = static_cast<std::uint8_t>(127.5 + 90.0 * std::sin(2.0 * kPi * u));
            p[1] = static_cast<std::uint8_t>(127.5 + 90.0 * std::sin(kPi * v));
            p[2] = static_cast<std::uint8_t>(127.5 + 60.0 * std::cos(2.0 * kPi * u) * std::cos(kPi * v));
        }
    return img;
}

void sample_pano_ref(const Image& pano, double lon, double lat, double out[3]) {
    double x = lon / (2.0 * kPi) * pano.width;
    if (x < 0.0) x += pano.width;
    if (x >= pano.width) x -= pano.width;
    double y = (kPi / 2.0 - lat) / kPi * pano.height;
    const double xf = x - 0.5, yf = y - 0.5;
    int x0 = static_cast<int>(std::floor(xf));
    int y0 = static_cast<int>(std::floor(yf));
    const double wx = xf - x0, wy = yf - y0;
    int x1 = x0 + 1;
    if (x0 < 0) x0 += pano.width;
    if (x1 >= pano.width) x1 -= pano.width;
    const int y1 = std::min(std::max(y0 + 1, 0), pano.height - 1);
    y0 = std::min(std::max(y0, 0), pano.height - 1);
    for (int c = 0; c < 3; ++c) {
        const double top = pano.pixel(y0, x0)[c] * (1 - wx) + pano.pixel(y0, x1)[c] * wx;
        const double bot = pano.pixel(y1, x0)[c] * (1 - wx) + pano.pixel(y1, x1)[c] * wx;
        out[c] = top * (1 - wy) + bot * wy;
    }
}

// Zero-tilt/roll pinhole render of the panorama: the target both undistort
// and recover should reproduce.
Image pinhole_render(const Image& pano, double pan_deg, const PerspectiveSpec& spec) {
    Image out(spec.width, spec.height);
    const double fpx = spec.focal_px();
    const Mat3 rot = rotation_matrix(pan_deg, 0.0, 0.0);
    for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c) {
            const Vec3 ray{((c + 0.5) - spec.width / 2.0) / fpx,
                           ((r + 0.5) - spec.height / 2.0) / fpx, 1.0};
            const Vec3 w = rot.tmul(ray.normalized());
            const double lon = std::atan2(w.x, w.z);
            const double lat = std::asin(std::min(1.0, std::max(-1.0, -w.y)));
            double px[3];
            sample_pano_ref(pano, lon, lat, px);
            std::uint8_t* p = out.pixel(r, c);
            for (int ch = 0; ch < 3; ++ch) p[ch] = static_cast<std::uint8_t>(std::lround(px[ch]));
        }
    return out;
}

CameraParameters fisheye_camera(double pan, double tilt, double roll) {
    CameraParameters cam;
    cam.pan_deg = pan;
    cam.tilt_deg = tilt;
    cam.roll_deg = roll;
    cam.focal_mm = 10.0;
    cam.k1 = 0.05;
    cam.max_incident_deg = 90.0;
    return cam;
}

}  // namespace

TEST_CASE("perspective spec validation") {
    PerspectiveSpec bad;
    bad.hfov_deg = 180.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.hfov_deg = 90.0;
    bad.width = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("dimension mismatch is rejected") {
    const Image img(100, 100);
    CameraParameters cam;  // 224x224
    CHECK_THROWS_AS(undistort(img, cam, PerspectiveSpec{}), std::invalid_argument);
}

TEST_CASE("undistort keeps the principal point fixed") {
    CameraParameters cam = fisheye_camera(0, 0, 0);
    cam.image_width_px = 113;
    cam.image_height_px = 113;
    Image input(113, 113);
    for (int r = 0; r < 113; ++r)
        for (int c = 0; c < 113; ++c) {
            input.pixel(r, c)[0] = static_cast<std::uint8_t>((r * 7 + c * 3) % 251);
            input.pixel(r, c)[1] = static_cast<std::uint8_t>((r * 5 + c * 11) % 251);
            input.pixel(r, c)[2] = static_cast<std::uint8_t>((r + c) % 251);
        }
    PerspectiveSpec spec;
    spec.width = 113;
    spec.height = 113;
    const Image out = undistort(input, cam, spec);
    // Center output pixel samples exactly the center input pixel.
    for (int ch = 0; ch < 3; ++ch) CHECK(out.pixel(56, 56)[ch] == input.pixel(56, 56)[ch]);
}

TEST_CASE("undistortion reproduces a direct pinhole render") {
    const Panorama pano(smooth_panorama(512));
    const CameraParameters cam = fisheye_camera(40.0, 0.0, 0.0);
    const Image fish = render_patch(pano, cam);

    PerspectiveSpec spec;
    spec.hfov_deg = 60.0;
    const Image undist = undistort(fish, cam, spec);
    const Image target = pinhole_render(pano.raster, cam.pan_deg, spec);
    CHECK(psnr(undist, target) > 30.0);
}

TEST_CASE("recover equals undistort bit-for-bit at zero tilt and roll") {
    const Panorama pano(smooth_panorama(256));
    const CameraParameters cam = fisheye_camera(123.0, 0.0, 0.0);
    const Image fish = render_patch(pano, cam);
    PerspectiveSpec spec;
    spec.hfov_deg = 70.0;
    const Image a = undistort(fish, cam, spec);
    const Image b = recover(fish, cam, spec);
    REQUIRE(std::memcmp(a.data.data(), b.data.data(), a.pixel_count() * 3) == 0);
}

TEST_CASE("render -> recover matches the zero-rotation pinhole render") {
    const Panorama pano(smooth_panorama(512));
    const CameraParameters cam = fisheye_camera(75.0, 20.0, 10.0);
    const Image fish = render_patch(pano, cam);

    PerspectiveSpec spec;
    spec.hfov_deg = 60.0;
    const Image recovered = recover(fish, cam, spec);
    const Image target = pinhole_render(pano.raster, cam.pan_deg, spec);
    CHECK(psnr(recovered, target) > 30.0);
}

TEST_CASE("recover levels a painted horizon to within one pixel") {
    // White panorama with a black band at latitude 0.
    Image pano_img = Image::solid(1024, 512, 250, 250, 250);
    for (int c = 0; c < 1024; ++c)
        for (int r = 254; r <= 257; ++r) {
            pano_img.pixel(r, c)[0] = 0;
            pano_img.pixel(r, c)[1] = 0;
            pano_img.pixel(r, c)[2] = 0;
        }
    const Panorama pano(std::move(pano_img));
    const CameraParameters cam = fisheye_camera(0.0, 20.0, 10.0);
    const Image fish = render_patch(pano, cam);

    PerspectiveSpec spec;
    spec.hfov_deg = 60.0;
    const Image rec = recover(fish, cam, spec);

    // Darkness-weighted centroid row per column.
    double min_row = 1e9, max_row = -1e9;
    for (int c = 0; c < rec.width; ++c) {
        double wsum = 0.0, rsum = 0.0;
        for (int r = 0; r < rec.height; ++r) {
            const double darkness = 250.0 - rec.pixel(r, c)[0];
            if (darkness > 30.0) {
                wsum += darkness;
                rsum += darkness * (r + 0.5);
            }
        }
        REQUIRE(wsum > 0.0);
        const double row = rsum / wsum;
        min_row = std::min(min_row, row);
        max_row = std::max(max_row, row);
    }
    CHECK(max_row - min_row <= 1.0);
    CHECK(std::abs(0.5 * (max_row + min_row) - rec.height / 2.0) <= 1.0);
}

TEST_CASE("near-identity remap is interpolation-limited") {
    // f_px of the output equals f/d of the camera, so the mapping is the
    // identity up to the cubic tan correction; compare against the center
    // crop on smooth content.
    CameraParameters cam = fisheye_camera(0, 0, 0);
    cam.focal_mm = 15.0;
    cam.k1 = 0.0;
    Image input(224, 224);
    for (int r = 0; r < 224; ++r)
        for (int c = 0; c < 224; ++c) {
            input.pixel(r, c)[0] = static_cast<std::uint8_t>(40 + (170.0 * r) / 224);
            input.pixel(r, c)[1] = static_cast<std::uint8_t>(40 + (170.0 * c) / 224);
            input.pixel(r, c)[2] = static_cast<std::uint8_t>(127.5 + 80.0 * std::sin(kPi * r / 112.0) * std::sin(kPi * c / 112.0));
        }
    const double f_px = cam.focal_mm / cam.pixel_pitch_mm();  // 140
    PerspectiveSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.hfov_deg = rad2deg(2.0 * std::atan((spec.width / 2.0) / f_px));
    const Image out = undistort(input, cam, spec);

    Image crop(64, 64);
    for (int r = 0; r < 64; ++r)
        std::memcpy(crop.pixel(r, 0), input.pixel(r + 80, 80), 64 * 3);
    CHECK(psnr(out, crop) > 40.0);
}

TEST_CASE("randomized parameter sweep stays in bounds") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> ang(-90.0, 90.0), pan(0.0, 360.0);
    std::uniform_real_distribution<double> f(6.0, 15.0), k(-1.0 / 6.0, 1.0 / 3.0), e(84.0, 96.0);
    Image input(96, 96);
    for (std::size_t i = 0; i < input.pixel_count() * 3; ++i)
        input.data[i] = static_cast<std::uint8_t>((i * 2654435761u) >> 24);
    for (int trial = 0; trial < 25; ++trial) {
        CameraParameters cam;
        cam.pan_deg = pan(gen);
        cam.tilt_deg = ang(gen);
        cam.roll_deg = ang(gen);
        cam.focal_mm = f(gen);
        cam.k1 = k(gen);
        cam.max_incident_deg = e(gen);
        cam.image_width_px = 96;
        cam.image_height_px = 96;
        PerspectiveSpec spec;
        spec.width = 80;
        spec.height = 48;
        spec.hfov_deg = 30.0 + 120.0 * (trial / 25.0);
        const Image a = undistort(input, cam, spec);
        const Image b = recover(input, cam, spec);
        CHECK(a.width == 80);
        CHECK(b.height == 48);
        const Image a4 = undistort(input, cam, spec, 4);
        REQUIRE(std::memcmp(a.data.data(), a4.data.data(), a.pixel_count() * 3) == 0);
    }
}

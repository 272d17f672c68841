#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "gencam/image.hpp"
#include "gencam/kernels.hpp"

using namespace gencam;
namespace k = gencam::kernels;

namespace {

struct BackendGuard {
    k::Backend saved = k::active();
    ~BackendGuard() { k::force(saved); }
};

Image random_raster(int w, int h, std::uint32_t seed) {
    Image img(w, h);
    std::uint32_t s = seed;
    for (std::size_t i = 0; i < img.pixel_count() * 3; ++i) {
        s = s * 1664525u + 1013904223u;
        img.data[i] = static_cast<std::uint8_t>(s >> 24);
    }
    return img;
}

struct CoordSet {
    std::vector<float> xs, ys;
    std::vector<std::uint8_t> valid;
};

CoordSet random_coords(int w, int h, std::size_t n, bool wrap, std::uint32_t seed) {
    CoordSet cs;
    cs.xs.resize(n);
    cs.ys.resize(n);
    cs.valid.resize(n);
    std::mt19937 gen(seed);
    std::uniform_real_distribution<float> fx(0.0f, static_cast<float>(w) - 1e-4f);
    std::uniform_real_distribution<float> fy(wrap ? 0.0f : -3.0f, static_cast<float>(h) + 3.0f);
    std::uniform_int_distribution<int> vd(0, 9);
    for (std::size_t i = 0; i < n; ++i) {
        cs.xs[i] = fx(gen);
        cs.ys[i] = fy(gen);
        cs.valid[i] = vd(gen) == 0 ? 0 : 1;
    }
    // Exercise the seam and the exact border rows.
    if (n >= 8) {
        cs.xs[0] = 0.0f;
        cs.xs[1] = static_cast<float>(w) - 1e-5f;
        cs.xs[2] = 0.25f;
        cs.ys[3] = 0.0f;
        cs.ys[4] = static_cast<float>(h) - 1e-4f;
        cs.xs[5] = static_cast<float>(w) * 0.5f;
        cs.valid[6] = 0;
    }
    return cs;
}

}  // namespace

TEST_CASE("backend control") {
    BackendGuard guard;
    CHECK(k::supported(k::Backend::Scalar));
    k::force(k::Backend::Scalar);
    CHECK(k::active() == k::Backend::Scalar);
    if (k::supported(k::Backend::Avx2)) {
        k::force(k::Backend::Avx2);
        CHECK(k::active() == k::Backend::Avx2);
    }
}

TEST_CASE("bilinear kernels agree bit-for-bit across backends") {
    if (!k::supported(k::Backend::Avx2)) return;
    BackendGuard guard;
    for (const bool wrap : {true, false}) {
        for (const std::uint32_t seed : {1u, 2u, 3u}) {
            const Image img = random_raster(37, 23, seed);
            const std::size_t n = 1003;  // odd size exercises the tail path
            const CoordSet cs = random_coords(img.width, img.height, n, wrap, seed * 7);

            std::vector<std::uint8_t> out_scalar(3 * n), out_avx2(3 * n);
            k::force(k::Backend::Scalar);
            k::bilinear_rgb8(img.data.data(), img.width, img.height, cs.xs.data(), cs.ys.data(),
                             cs.valid.data(), n, wrap, out_scalar.data());
            k::force(k::Backend::Avx2);
            k::bilinear_rgb8(img.data.data(), img.width, img.height, cs.xs.data(), cs.ys.data(),
                             cs.valid.data(), n, wrap, out_avx2.data());
            REQUIRE(std::memcmp(out_scalar.data(), out_avx2.data(), out_scalar.size()) == 0);
        }
    }
}

TEST_CASE("bilinear matches a double-precision reference") {
    BackendGuard guard;
    const Image img = random_raster(29, 31, 11);
    const std::size_t n = 500;
    const CoordSet cs = random_coords(img.width, img.height, n, false, 77);
    std::vector<std::uint8_t> out(3 * n);
    k::force(k::Backend::Scalar);
    k::bilinear_rgb8(img.data.data(), img.width, img.height, cs.xs.data(), cs.ys.data(),
                     cs.valid.data(), n, false, out.data());
    for (std::size_t i = 0; i < n; ++i) {
        if (!cs.valid[i]) {
            REQUIRE(out[3 * i] == 0);
            continue;
        }
        const double xf = cs.xs[i] - 0.5, yf = cs.ys[i] - 0.5;
        int x0 = static_cast<int>(std::floor(xf));
        int y0 = static_cast<int>(std::floor(yf));
        const double wx = xf - x0, wy = yf - y0;
        const int x1 = std::min(std::max(x0 + 1, 0), img.width - 1);
        x0 = std::min(std::max(x0, 0), img.width - 1);
        const int y1 = std::min(std::max(y0 + 1, 0), img.height - 1);
        y0 = std::min(std::max(y0, 0), img.height - 1);
        for (int c = 0; c < 3; ++c) {
            const double top = img.pixel(y0, x0)[c] * (1 - wx) + img.pixel(y0, x1)[c] * wx;
            const double bot = img.pixel(y1, x0)[c] * (1 - wx) + img.pixel(y1, x1)[c] * wx;
            const double v = top * (1 - wy) + bot * wy;
            REQUIRE(std::abs(v - out[3 * i + c]) <= 1.0);  // float vs double rounding
        }
    }
}

TEST_CASE("sum of squared differences is exact on both backends") {
    BackendGuard guard;
    std::mt19937 gen(5);
    std::uniform_int_distribution<int> d(0, 255);
    for (const std::size_t n : {1ul, 31ul, 32ul, 33ul, 1000ul, 4096ul}) {
        std::vector<std::uint8_t> a(n), b(n);
        std::uint64_t expect = 0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<std::uint8_t>(d(gen));
            b[i] = static_cast<std::uint8_t>(d(gen));
            const int diff = static_cast<int>(a[i]) - static_cast<int>(b[i]);
            expect += static_cast<std::uint64_t>(diff * diff);
        }
        k::force(k::Backend::Scalar);
        CHECK(k::sum_sq_diff_u8(a.data(), b.data(), n) == expect);
        if (k::supported(k::Backend::Avx2)) {
            k::force(k::Backend::Avx2);
            CHECK(k::sum_sq_diff_u8(a.data(), b.data(), n) == expect);
        }
    }
}

TEST_CASE("point distance sums agree across backends to roundoff") {
    if (!k::supported(k::Backend::Avx2)) return;
    BackendGuard guard;
    std::mt19937 gen(13);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (const std::size_t n : {1ul, 5ul, 64ul, 1001ul}) {
        std::vector<double> a3(3 * n), b3(3 * n), a2(2 * n), b2(2 * n);
        for (auto& v : a3) v = d(gen);
        for (auto& v : b3) v = d(gen);
        for (auto& v : a2) v = d(gen);
        for (auto& v : b2) v = d(gen);
        k::force(k::Backend::Scalar);
        const double s3 = k::sum_point_dist3(a3.data(), b3.data(), n);
        const double s2 = k::sum_point_dist2(a2.data(), b2.data(), n);
        k::force(k::Backend::Avx2);
        const double v3 = k::sum_point_dist3(a3.data(), b3.data(), n);
        const double v2 = k::sum_point_dist2(a2.data(), b2.data(), n);
        CHECK(std::abs(s3 - v3) <= 1e-12 * std::max(1.0, std::abs(s3)));
        CHECK(std::abs(s2 - v2) <= 1e-12 * std::max(1.0, std::abs(s2)));
    }
}

// Scalar reference kernels. The bilinear arithmetic is written in float with
// the exact operation tree the AVX2 variant uses, and rounding goes through
// lrintf (round-to-nearest-even, matching cvtps); the SIMD results are
// bit-identical, which the equivalence tests assert. This file is compiled
// with -ffp-contract=off so the compiler cannot fuse the blend into FMAs.

#include <cmath>

#include "gencam/kernels.hpp"

namespace gencam::kernels::detail {

namespace {

inline int clamp_int(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void bilinear_rgb8_scalar(const std::uint8_t* src, int w, int h, const float* xs,
                          const float* ys, const std::uint8_t* valid, std::size_t n,
                          bool wrap_x, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        if (valid && !valid[i]) {
            out[3 * i] = out[3 * i + 1] = out[3 * i + 2] = 0;
            continue;
        }
        const float xf = xs[i] - 0.5f;
        const float yf = ys[i] - 0.5f;
        const float xfl = std::floor(xf);
        const float yfl = std::floor(yf);
        const float wx = xf - xfl;
        const float wy = yf - yfl;
        int x0 = static_cast<int>(xfl);
        int y0 = static_cast<int>(yfl);
        int x1 = x0 + 1;
        if (wrap_x) {
            if (x0 < 0) x0 += w;
            if (x1 >= w) x1 -= w;
        } else {
            x0 = clamp_int(x0, 0, w - 1);
            x1 = clamp_int(x1, 0, w - 1);
        }
        const int y1 = clamp_int(y0 + 1, 0, h - 1);
        y0 = clamp_int(y0, 0, h - 1);

        const std::uint8_t* p00 = src + 3 * (static_cast<std::size_t>(y0) * w + x0);
        const std::uint8_t* p01 = src + 3 * (static_cast<std::size_t>(y0) * w + x1);
        const std::uint8_t* p10 = src + 3 * (static_cast<std::size_t>(y1) * w + x0);
        const std::uint8_t* p11 = src + 3 * (static_cast<std::size_t>(y1) * w + x1);
        for (int c = 0; c < 3; ++c) {
            const float top = static_cast<float>(p00[c]) * (1.0f - wx) + static_cast<float>(p01[c]) * wx;
            const float bot = static_cast<float>(p10[c]) * (1.0f - wx) + static_cast<float>(p11[c]) * wx;
            const float v = top * (1.0f - wy) + bot * wy;
            out[3 * i + c] = static_cast<std::uint8_t>(std::lrintf(v));
        }
    }
}

std::uint64_t sum_sq_diff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        acc += static_cast<std::uint64_t>(d * d);
    }
    return acc;
}

double sum_point_dist3_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = a[3 * i] - b[3 * i];
        const double dy = a[3 * i + 1] - b[3 * i + 1];
        const double dz = a[3 * i + 2] - b[3 * i + 2];
        acc += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    return acc;
}

double sum_point_dist2_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = a[2 * i] - b[2 * i];
        const double dy = a[2 * i + 1] - b[2 * i + 1];
        acc += std::sqrt(dx * dx + dy * dy);
    }
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{bilinear_rgb8_scalar, sum_sq_diff_u8_scalar, sum_point_dist3_scalar,
                         sum_point_dist2_scalar};
    return ops;
}

}  // namespace gencam::kernels::detail

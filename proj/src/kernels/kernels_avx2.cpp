// AVX2 kernel variants. Compiled with -mavx2 and -ffp-contract=off; only
// reached through the dispatch table after a runtime CPU check.

#include "gencam/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace gencam::kernels::detail {

namespace {

void bilinear_rgb8_avx2(const std::uint8_t* src, int w, int h, const float* xs,
                        const float* ys, const std::uint8_t* valid, std::size_t n,
                        bool wrap_x, std::uint8_t* out) {
    const std::size_t n8 = n / 8 * 8;
    const __m256 half = _mm256_set1_ps(0.5f);
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256i wi = _mm256_set1_epi32(w);
    const __m256i wm1 = _mm256_set1_epi32(w - 1);
    const __m256i hm1 = _mm256_set1_epi32(h - 1);
    const __m256i zero = _mm256_setzero_si256();
    const __m256i three = _mm256_set1_epi32(3);
    const __m256i byte_mask = _mm256_set1_epi32(0xff);

    alignas(32) std::int32_t r_arr[8], g_arr[8], b_arr[8];

    for (std::size_t i = 0; i < n8; i += 8) {
        const __m256 xf = _mm256_sub_ps(_mm256_loadu_ps(xs + i), half);
        const __m256 yf = _mm256_sub_ps(_mm256_loadu_ps(ys + i), half);
        const __m256 xfl = _mm256_floor_ps(xf);
        const __m256 yfl = _mm256_floor_ps(yf);
        const __m256 wx = _mm256_sub_ps(xf, xfl);
        const __m256 wy = _mm256_sub_ps(yf, yfl);

        __m256i x0 = _mm256_cvtps_epi32(xfl);  // floor value is exact, round mode irrelevant
        __m256i y0 = _mm256_cvtps_epi32(yfl);
        __m256i x1 = _mm256_add_epi32(x0, _mm256_set1_epi32(1));
        if (wrap_x) {
            x0 = _mm256_blendv_epi8(x0, _mm256_add_epi32(x0, wi),
                                    _mm256_cmpgt_epi32(zero, x0));
            const __m256i ge_w = _mm256_cmpgt_epi32(x1, wm1);
            x1 = _mm256_blendv_epi8(x1, _mm256_sub_epi32(x1, wi), ge_w);
        } else {
            x0 = _mm256_min_epi32(_mm256_max_epi32(x0, zero), wm1);
            x1 = _mm256_min_epi32(_mm256_max_epi32(x1, zero), wm1);
        }
        const __m256i y1 = _mm256_min_epi32(_mm256_max_epi32(_mm256_add_epi32(y0, _mm256_set1_epi32(1)), zero), hm1);
        y0 = _mm256_min_epi32(_mm256_max_epi32(y0, zero), hm1);

        const __m256i row0 = _mm256_mullo_epi32(y0, wi);
        const __m256i row1 = _mm256_mullo_epi32(y1, wi);
        const __m256i o00 = _mm256_mullo_epi32(_mm256_add_epi32(row0, x0), three);
        const __m256i o01 = _mm256_mullo_epi32(_mm256_add_epi32(row0, x1), three);
        const __m256i o10 = _mm256_mullo_epi32(_mm256_add_epi32(row1, x0), three);
        const __m256i o11 = _mm256_mullo_epi32(_mm256_add_epi32(row1, x1), three);

        // Each gather reads 4 bytes at the pixel: R,G,B and one overrun byte.
        const int* base = reinterpret_cast<const int*>(src);
        const __m256i q00 = _mm256_i32gather_epi32(base, o00, 1);
        const __m256i q01 = _mm256_i32gather_epi32(base, o01, 1);
        const __m256i q10 = _mm256_i32gather_epi32(base, o10, 1);
        const __m256i q11 = _mm256_i32gather_epi32(base, o11, 1);

        const __m256 iwx = _mm256_sub_ps(one, wx);
        const __m256 iwy = _mm256_sub_ps(one, wy);

        auto channel = [&](int shift) {
            const __m256 c00 = _mm256_cvtepi32_ps(_mm256_and_si256(_mm256_srli_epi32(q00, shift), byte_mask));
            const __m256 c01 = _mm256_cvtepi32_ps(_mm256_and_si256(_mm256_srli_epi32(q01, shift), byte_mask));
            const __m256 c10 = _mm256_cvtepi32_ps(_mm256_and_si256(_mm256_srli_epi32(q10, shift), byte_mask));
            const __m256 c11 = _mm256_cvtepi32_ps(_mm256_and_si256(_mm256_srli_epi32(q11, shift), byte_mask));
            const __m256 top = _mm256_add_ps(_mm256_mul_ps(c00, iwx), _mm256_mul_ps(c01, wx));
            const __m256 bot = _mm256_add_ps(_mm256_mul_ps(c10, iwx), _mm256_mul_ps(c11, wx));
            const __m256 v = _mm256_add_ps(_mm256_mul_ps(top, iwy), _mm256_mul_ps(bot, wy));
            return _mm256_cvtps_epi32(v);  // round-to-nearest-even, matches lrintf
        };

        _mm256_store_si256(reinterpret_cast<__m256i*>(r_arr), channel(0));
        _mm256_store_si256(reinterpret_cast<__m256i*>(g_arr), channel(8));
        _mm256_store_si256(reinterpret_cast<__m256i*>(b_arr), channel(16));

        for (int k = 0; k < 8; ++k) {
            const std::size_t j = i + k;
            if (valid && !valid[j]) {
                out[3 * j] = out[3 * j + 1] = out[3 * j + 2] = 0;
            } else {
                out[3 * j] = static_cast<std::uint8_t>(r_arr[k]);
                out[3 * j + 1] = static_cast<std::uint8_t>(g_arr[k]);
                out[3 * j + 2] = static_cast<std::uint8_t>(b_arr[k]);
            }
        }
    }
    if (n8 < n)
        scalar_ops().bilinear_rgb8(src, w, h, xs + n8, ys + n8, valid ? valid + n8 : nullptr,
                                   n - n8, wrap_x, out + 3 * n8);
}

std::uint64_t sum_sq_diff_u8_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    const std::size_t n32 = n / 32 * 32;
    __m256i acc = _mm256_setzero_si256();  // 4 x u64
    const __m256i zero = _mm256_setzero_si256();
    for (std::size_t i = 0; i < n32; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i alo = _mm256_unpacklo_epi8(va, zero);
        const __m256i ahi = _mm256_unpackhi_epi8(va, zero);
        const __m256i blo = _mm256_unpacklo_epi8(vb, zero);
        const __m256i bhi = _mm256_unpackhi_epi8(vb, zero);
        const __m256i dlo = _mm256_sub_epi16(alo, blo);
        const __m256i dhi = _mm256_sub_epi16(ahi, bhi);
        // i32 lanes hold sums of two squares; <= 2*255^2, widen to u64 per block
        const __m256i sq = _mm256_add_epi32(_mm256_madd_epi16(dlo, dlo), _mm256_madd_epi16(dhi, dhi));
        acc = _mm256_add_epi64(acc, _mm256_unpacklo_epi32(sq, zero));
        acc = _mm256_add_epi64(acc, _mm256_unpackhi_epi32(sq, zero));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (std::size_t i = n32; i < n; ++i) {
        const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        total += static_cast<std::uint64_t>(d * d);
    }
    return total;
}

double sum_point_dist3_avx2(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n / 4 * 4;
    __m256d acc = _mm256_setzero_pd();
    const __m128i idx = _mm_set_epi32(9, 6, 3, 0);
    for (std::size_t i = 0; i < n4; i += 4) {
        const double* pa = a + 3 * i;
        const double* pb = b + 3 * i;
        const __m256d ax = _mm256_i32gather_pd(pa, idx, 8);
        const __m256d ay = _mm256_i32gather_pd(pa + 1, idx, 8);
        const __m256d az = _mm256_i32gather_pd(pa + 2, idx, 8);
        const __m256d bx = _mm256_i32gather_pd(pb, idx, 8);
        const __m256d by = _mm256_i32gather_pd(pb + 1, idx, 8);
        const __m256d bz = _mm256_i32gather_pd(pb + 2, idx, 8);
        const __m256d dx = _mm256_sub_pd(ax, bx);
        const __m256d dy = _mm256_sub_pd(ay, by);
        const __m256d dz = _mm256_sub_pd(az, bz);
        const __m256d ss = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                         _mm256_mul_pd(dz, dz));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(ss));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (std::size_t i = n4; i < n; ++i) {
        const double dx = a[3 * i] - b[3 * i];
        const double dy = a[3 * i + 1] - b[3 * i + 1];
        const double dz = a[3 * i + 2] - b[3 * i + 2];
        total += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    return total;
}

double sum_point_dist2_avx2(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n / 4 * 4;
    __m256d acc = _mm256_setzero_pd();
    const __m128i idx = _mm_set_epi32(6, 4, 2, 0);
    for (std::size_t i = 0; i < n4; i += 4) {
        const double* pa = a + 2 * i;
        const double* pb = b + 2 * i;
        const __m256d ax = _mm256_i32gather_pd(pa, idx, 8);
        const __m256d ay = _mm256_i32gather_pd(pa + 1, idx, 8);
        const __m256d bx = _mm256_i32gather_pd(pb, idx, 8);
        const __m256d by = _mm256_i32gather_pd(pb + 1, idx, 8);
        const __m256d dx = _mm256_sub_pd(ax, bx);
        const __m256d dy = _mm256_sub_pd(ay, by);
        const __m256d ss = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(ss));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (std::size_t i = n4; i < n; ++i) {
        const double dx = a[2 * i] - b[2 * i];
        const double dy = a[2 * i + 1] - b[2 * i + 1];
        total += std::sqrt(dx * dx + dy * dy);
    }
    return total;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{bilinear_rgb8_avx2, sum_sq_diff_u8_avx2, sum_point_dist3_avx2,
                         sum_point_dist2_avx2};
    return ops;
}

}  // namespace gencam::kernels::detail

#else

namespace gencam::kernels::detail {

const Ops& avx2_ops() { return scalar_ops(); }

}  // namespace gencam::kernels::detail

#endif

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace gencam::kernels {

// Data-parallel inner loops used by the remappers and metrics. Every kernel
// has a scalar reference implementation and an AVX2 variant; the active
// backend is picked once at startup from CPU features and can be forced for
// testing (or with the GENCAM_KERNEL environment variable: "scalar"/"avx2").
enum class Backend { Scalar, Avx2 };

Backend active();
bool supported(Backend backend);
void force(Backend backend);  // throws std::runtime_error if unsupported
const char* backend_name(Backend backend);

// Bilinear sample of an interleaved RGB8 raster at n continuous positions
// (pixel centers at integer + 0.5). y is clamped to the raster; x wraps when
// wrap_x is set (caller pre-wraps x into [0, w)) and clamps otherwise.
// valid[i] == 0 writes black. src must keep one readable byte past the last
// pixel (Image guarantees this).
void bilinear_rgb8(const std::uint8_t* src, int w, int h, const float* xs, const float* ys,
                   const std::uint8_t* valid, std::size_t n, bool wrap_x, std::uint8_t* out);

// Sum of squared differences over two u8 buffers (exact integer result).
std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

// Sum over i of the Euclidean distance between packed xyz triples.
double sum_point_dist3(const double* a, const double* b, std::size_t n);

// Sum over i of the Euclidean distance between packed xy pairs.
double sum_point_dist2(const double* a, const double* b, std::size_t n);

namespace detail {

struct Ops {
    void (*bilinear_rgb8)(const std::uint8_t*, int, int, const float*, const float*,
                          const std::uint8_t*, std::size_t, bool, std::uint8_t*);
    std::uint64_t (*sum_sq_diff_u8)(const std::uint8_t*, const std::uint8_t*, std::size_t);
    double (*sum_point_dist3)(const double*, const double*, std::size_t);
    double (*sum_point_dist2)(const double*, const double*, std::size_t);
};

const Ops& scalar_ops();
const Ops& avx2_ops();  // only valid to call through when AVX2 is supported

}  // namespace detail
}  // namespace gencam::kernels

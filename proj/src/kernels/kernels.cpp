#include "gencam/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace gencam::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend pick_initial() {
    if (const char* env = std::getenv("GENCAM_KERNEL")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

Backend& current() {
    static Backend backend = pick_initial();
    return backend;
}

const detail::Ops& ops() {
    return current() == Backend::Avx2 ? detail::avx2_ops() : detail::scalar_ops();
}

}  // namespace

Backend active() { return current(); }

bool supported(Backend backend) {
    return backend == Backend::Scalar || cpu_has_avx2();
}

void force(Backend backend) {
    if (!supported(backend))
        throw std::runtime_error(std::string("kernel backend not supported on this CPU: ") +
                                 backend_name(backend));
    current() = backend;
}

const char* backend_name(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

void bilinear_rgb8(const std::uint8_t* src, int w, int h, const float* xs, const float* ys,
                   const std::uint8_t* valid, std::size_t n, bool wrap_x, std::uint8_t* out) {
    ops().bilinear_rgb8(src, w, h, xs, ys, valid, n, wrap_x, out);
}

std::uint64_t sum_sq_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    return ops().sum_sq_diff_u8(a, b, n);
}

double sum_point_dist3(const double* a, const double* b, std::size_t n) {
    return ops().sum_point_dist3(a, b, n);
}

double sum_point_dist2(const double* a, const double* b, std::size_t n) {
    return ops().sum_point_dist2(a, b, n);
}

}  // namespace gencam::kernels

#pragma once

#include <cstdint>

namespace gencam {

// Counter-based generator built on the splitmix64 finalizer. Every draw is a
// pure function of (seed, stream, counter), so sample i of any batch can be
// produced independently of the others — parallel schedules cannot change
// results.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ stream);
    return mix64(h ^ counter);
}

// Uniform double in [0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(at(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Small sequential generator for code with data-dependent draw counts
// (rejection sampling). State is derived from (seed, stream) only.
class Sequence {
  public:
    Sequence(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ stream)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (uses two uniforms, discards the pair's
    // second value for simplicity).
    double next_normal();

  private:
    std::uint64_t state_;
};

}  // namespace rng
}  // namespace gencam

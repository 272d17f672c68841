#pragma once

#include <cstdint>
#include <string>

namespace gencam {

inline constexpr const char* kVersion = "1.0.0";

// Reference configuration: every numeric default the CLI uses. The same
// content is checked in at configs/defaults.json; a test keeps them in sync,
// and --version reports this text's FNV-1a hash so runs can be tied to the
// defaults they used.
inline constexpr const char* kDefaultConfigJson = R"({
  "version": "1.0.0",
  "seed": 0,
  "threads": 1,
  "compare_models": {
    "focal_mm": 10.5,
    "pixel_pitch_mm": 0.10714285714285714,
    "quadrature_steps": 100000
  },
  "fit": {
    "quadrature_steps": 4001
  },
  "derive_weights": {
    "grid_points": 201,
    "samples": 20000
  },
  "landscape": {
    "grid_points": 201,
    "samples": 20000
  },
  "gen_dataset": {
    "count": 100,
    "split": "train",
    "image_height_px": 224
  },
  "perspective": {
    "width": 224,
    "height": 224,
    "hfov_deg": 90.0
  },
  "evaluate": {
    "repe_points": 32400
  }
}
)";

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace gencam

#pragma once

#include <cstdint>
#include <string>

#include "gencam/camera.hpp"
#include "gencam/image.hpp"

namespace gencam {

// Equirectangular panorama: longitude [0, 360) maps linearly to columns,
// latitude [-90, 90] to rows (top row is +90). Width must be exactly twice
// the height.
struct Panorama {
    Image raster;

    explicit Panorama(Image img);

    int width() const { return raster.width; }
    int height() const { return raster.height; }
};

enum class Split { Train, Test };

Split split_from_string(const std::string& s);

struct PatchRecord {
    Image image;
    CameraParameters params;
    std::uint64_t seed = 0;
};

// One camera-parameter draw. Train split follows the mixed/categorical
// distributions (tilt and roll: 70% N(0, 15 deg) / 30% U[-90, 90], clamped;
// aspect ratio categorical over {1/1, 5/4, 4/3, 3/2, 16/9}); the test split
// replaces both with uniform draws. Tuples whose image circle diameter falls
// below the image height are rejected and redrawn; the draw is a pure
// function of (split, seed, index).
CameraParameters sample_parameters(Split split, std::uint64_t seed, std::uint64_t index = 0,
                                   int image_height_px = 224);

// Renders the fisheye patch seen by `params` from the panorama: every pixel
// inside the image circle is bilinearly sampled (longitude wraps, latitude
// clamps at the poles); pixels outside are black.
Image render_patch(const Panorama& pano, const CameraParameters& params, int threads = 1);

// Draw-and-render convenience: one labeled patch with its RNG provenance.
PatchRecord make_patch(const Panorama& pano, Split split, std::uint64_t seed,
                       std::uint64_t index, int threads = 1);

// Aspect-ratio table used by the train split, exposed for tests.
struct AspectChoice {
    double ratio;
    double probability;
};
const std::array<AspectChoice, 5>& aspect_table();

}  // namespace gencam

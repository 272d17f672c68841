#pragma once

#include "gencam/camera.hpp"
#include "gencam/image.hpp"

namespace gencam {

// Target perspective (pinhole) view for undistortion and recovery.
struct PerspectiveSpec {
    int width = 224;
    int height = 224;
    double hfov_deg = 90.0;  // horizontal field of view, strictly < 180

    void validate() const;
    double focal_px() const;
};

// Remaps a fisheye image to a pinhole view using intrinsics only (no
// rotation applied). Rays beyond the valid incident cone are black; sampling
// is inverse-mapped bilinear with clamped borders.
Image undistort(const Image& image, const CameraParameters& params, const PerspectiveSpec& spec,
                int threads = 1);

// Undistortion plus removal of tilt and roll: the output's vertical axis
// aligns with world gravity and the horizon is level. Pan is not recovered.
// With tilt = roll = 0 this is bit-identical to undistort.
Image recover(const Image& image, const CameraParameters& params, const PerspectiveSpec& spec,
              int threads = 1);

}  // namespace gencam

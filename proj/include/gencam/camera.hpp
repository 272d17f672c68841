#pragma once

#include <optional>
#include <string>

#include "gencam/geometry.hpp"
#include "gencam/projection.hpp"

namespace gencam {

// Full description of one fisheye camera. Angles are stored in degrees at
// the API surface and converted to radians internally. The translation
// vector is ignored throughout; the principal point sits at the image
// center and the pixel pitch is square: d = sensor_height_mm / image_height_px.
struct CameraParameters {
    double pan_deg = 0.0;            // [0, 360)
    double tilt_deg = 0.0;           // [-90, 90]
    double roll_deg = 0.0;           // [-90, 90]
    double focal_mm = 10.5;          // [6, 15]
    double k1 = 0.0;                 // [-1/6, 1/3]
    double max_incident_deg = 90.0;  // [84, 96]
    double sensor_height_mm = 24.0;  // fixed
    int image_height_px = 224;
    int image_width_px = 224;

    double pixel_pitch_mm() const { return sensor_height_mm / image_height_px; }
    double principal_u() const { return image_width_px / 2.0; }
    double principal_v() const { return image_height_px / 2.0; }

    ProjectionModel model() const { return ProjectionModel::generic_cubic(focal_mm, k1); }

    double eta_valid_rad() const { return eta_valid(model(), deg2rad(max_incident_deg)); }

    // Image-circle radius in pixels: radial distance at the valid limit.
    double image_circle_radius_px() const {
        return radial_distance(model(), eta_valid_rad()) / pixel_pitch_mm();
    }

    // Throws std::invalid_argument when a field is outside its documented range.
    void validate() const;
};

// World-to-camera rotation. Pan turns about the world vertical axis, then
// tilt about the camera's horizontal (image-right) axis, then roll about
// the optical axis. The world frame coincides with the camera frame at zero
// angles (x right, y down, z forward on the horizon; vertical is -y), so
// rotation_matrix(0, 0, 0) is the identity; positive tilt raises the
// optical axis above the horizon.
Mat3 rotation_matrix(double pan_deg, double tilt_deg, double roll_deg);

struct PixelCoord {
    double u = 0.0;
    double v = 0.0;
};

// Projects a unit bearing to pixel coordinates; empty when the bearing lies
// beyond the camera's valid incident cone.
std::optional<PixelCoord> world_to_image(const CameraParameters& cam, const Vec3& bearing);

// Lifts a pixel back to a unit bearing. Throws std::domain_error when the
// pixel lies outside the image circle.
Vec3 image_to_world(const CameraParameters& cam, const PixelCoord& uv);

// JSON interchange (the contract with external predictors/trainers).
std::string to_json(const CameraParameters& cam);
CameraParameters camera_from_json(const std::string& text);
CameraParameters load_camera_json(const std::string& path);
void save_camera_json(const CameraParameters& cam, const std::string& path);

}  // namespace gencam

#include "gencam/camera.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gencam {

namespace {

void check_range(double value, double lo, double hi, const char* name) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream os;
        os << "CameraParameters: " << name << " = " << value << " outside [" << lo << ", " << hi << "]";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

void CameraParameters::validate() const {
    if (!(pan_deg >= 0.0 && pan_deg < 360.0))
        throw std::invalid_argument("CameraParameters: pan_deg outside [0, 360)");
    check_range(tilt_deg, -90.0, 90.0, "tilt_deg");
    check_range(roll_deg, -90.0, 90.0, "roll_deg");
    check_range(focal_mm, 6.0, 15.0, "focal_mm");
    check_range(k1, -1.0 / 6.0, 1.0 / 3.0, "k1");
    check_range(max_incident_deg, 84.0, 96.0, "max_incident_deg");
    if (std::abs(sensor_height_mm - 24.0) > 1e-9)
        throw std::invalid_argument("CameraParameters: sensor_height_mm must be 24.0");
    if (image_height_px <= 0 || image_width_px <= 0)
        throw std::invalid_argument("CameraParameters: image dimensions must be positive");
    if (eta_valid_rad() <= 0.0)
        throw std::invalid_argument("CameraParameters: empty valid incident range");
}

Mat3 rotation_matrix(double pan_deg, double tilt_deg, double roll_deg) {
    // Wrap pan so pan and pan + 360 produce bit-identical matrices.
    double pan_wrapped = std::fmod(pan_deg, 360.0);
    if (pan_wrapped < 0.0) pan_wrapped += 360.0;
    const double pan = deg2rad(pan_wrapped);
    const double tilt = deg2rad(tilt_deg);
    const double roll = deg2rad(roll_deg);

    // World axes coincide with the camera at zero rotation: x right, y down,
    // z forward along the horizon; the world vertical is -y. Pan turns about
    // the vertical, tilt about the camera-horizontal x axis (positive raises
    // the optical axis above the horizon), roll about the optical axis.
    const double cp = std::cos(pan), sp = std::sin(pan);
    const Mat3 pan_m{{cp, 0, -sp, 0, 1, 0, sp, 0, cp}};
    const double ct = std::cos(-tilt), st = std::sin(-tilt);
    const Mat3 tilt_m{{1, 0, 0, 0, ct, -st, 0, st, ct}};
    const double cr = std::cos(roll), sr = std::sin(roll);
    const Mat3 roll_m{{cr, -sr, 0, sr, cr, 0, 0, 0, 1}};

    return roll_m * (tilt_m * pan_m);
}

std::optional<PixelCoord> world_to_image(const CameraParameters& cam, const Vec3& bearing) {
    const Mat3 rot = rotation_matrix(cam.pan_deg, cam.tilt_deg, cam.roll_deg);
    const Vec3 pc = rot * bearing;
    const double z = std::max(-1.0, std::min(1.0, pc.z));
    const double eta = std::acos(z);
    if (eta > cam.eta_valid_rad() + 1e-12) return std::nullopt;
    const double gamma = radial_distance(cam.model(), std::min(eta, cam.eta_valid_rad()));
    const double r_px = gamma / cam.pixel_pitch_mm();
    const double alpha = std::atan2(pc.y, pc.x);
    return PixelCoord{cam.principal_u() + r_px * std::cos(alpha),
                      cam.principal_v() + r_px * std::sin(alpha)};
}

Vec3 image_to_world(const CameraParameters& cam, const PixelCoord& uv) {
    const double du = uv.u - cam.principal_u();
    const double dv = uv.v - cam.principal_v();
    const double gamma = std::hypot(du, dv) * cam.pixel_pitch_mm();
    const double gamma_max = radial_distance(cam.model(), cam.eta_valid_rad());
    if (gamma > gamma_max + 1e-9)
        throw std::domain_error("image_to_world: pixel outside the image circle");
    const double eta = std::min(incident_angle(cam.model(), std::min(gamma, gamma_max)),
                                cam.eta_valid_rad());
    const double alpha = std::atan2(dv, du);
    const double se = std::sin(eta);
    const Vec3 ray{se * std::cos(alpha), se * std::sin(alpha), std::cos(eta)};
    const Mat3 rot = rotation_matrix(cam.pan_deg, cam.tilt_deg, cam.roll_deg);
    return rot.tmul(ray);
}

std::string to_json(const CameraParameters& cam) {
    nlohmann::ordered_json j;
    j["pan_deg"] = cam.pan_deg;
    j["tilt_deg"] = cam.tilt_deg;
    j["roll_deg"] = cam.roll_deg;
    j["focal_mm"] = cam.focal_mm;
    j["k1"] = cam.k1;
    j["max_incident_deg"] = cam.max_incident_deg;
    j["sensor_height_mm"] = cam.sensor_height_mm;
    j["image_height_px"] = cam.image_height_px;
    j["image_width_px"] = cam.image_width_px;
    j["principal_point_px"] = {cam.principal_u(), cam.principal_v()};
    return j.dump(2);
}

CameraParameters camera_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CameraParameters cam;
    cam.pan_deg = j.at("pan_deg").get<double>();
    cam.tilt_deg = j.at("tilt_deg").get<double>();
    cam.roll_deg = j.at("roll_deg").get<double>();
    cam.focal_mm = j.at("focal_mm").get<double>();
    cam.k1 = j.at("k1").get<double>();
    cam.max_incident_deg = j.at("max_incident_deg").get<double>();
    cam.sensor_height_mm = j.value("sensor_height_mm", 24.0);
    cam.image_height_px = j.at("image_height_px").get<int>();
    cam.image_width_px = j.at("image_width_px").get<int>();
    if (j.contains("principal_point_px")) {
        const auto pp = j.at("principal_point_px");
        if (std::abs(pp.at(0).get<double>() - cam.principal_u()) > 1e-6 ||
            std::abs(pp.at(1).get<double>() - cam.principal_v()) > 1e-6)
            throw std::invalid_argument("CameraParameters: principal point must be the image center");
    }
    cam.validate();
    return cam;
}

CameraParameters load_camera_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open camera file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return camera_from_json(buf.str());
}

void save_camera_json(const CameraParameters& cam, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write camera file: " + path);
    out << to_json(cam) << "\n";
}

}  // namespace gencam

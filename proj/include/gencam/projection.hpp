#pragma once

#include <limits>
#include <string>

namespace gencam {

// Radial projection laws gamma = g(eta): the generic cubic plus the four
// standard trigonometric fisheye models it generalizes.
enum class ProjectionKind {
    GenericCubic,    // f(eta + k1 eta^3)
    Stereographic,   // 2f tan(eta/2)
    Equidistance,    // f eta
    EquisolidAngle,  // 2f sin(eta/2)
    Orthogonal,      // f sin(eta)
};

struct ProjectionModel {
    ProjectionKind kind = ProjectionKind::GenericCubic;
    double focal_mm = 10.5;
    double k1 = 0.0;  // used by GenericCubic only

    static ProjectionModel generic_cubic(double f, double k1) {
        return {ProjectionKind::GenericCubic, f, k1};
    }
    static ProjectionModel stereographic(double f) { return {ProjectionKind::Stereographic, f, 0.0}; }
    static ProjectionModel equidistance(double f) { return {ProjectionKind::Equidistance, f, 0.0}; }
    static ProjectionModel equisolid_angle(double f) { return {ProjectionKind::EquisolidAngle, f, 0.0}; }
    static ProjectionModel orthogonal(double f) { return {ProjectionKind::Orthogonal, f, 0.0}; }
};

const char* projection_kind_name(ProjectionKind kind);

// Largest incident angle (radians) on which the model's radial profile is
// strictly increasing. GenericCubic with k1 < 0 folds at sqrt(-1/(3 k1));
// Orthogonal folds at 90 degrees.
double eta_monotone_limit(const ProjectionModel& model);

// min(eta_max, monotone limit): the usable incident-angle range of a camera
// with this model and the given maximum incident angle.
double eta_valid(const ProjectionModel& model, double eta_max_rad);

// gamma = g(eta) in millimeters. Domain error if eta is negative or beyond
// the monotone limit.
double radial_distance(const ProjectionModel& model, double eta_rad);

// Inverse of radial_distance on the monotone branch: the unique eta with
// g(eta) = gamma. Domain error if gamma is negative or beyond the profile's
// maximum (a pixel outside the image circle).
double incident_angle(const ProjectionModel& model, double gamma_mm);

// Closed-form machinery for the cubic profile k1 t^3 + t = g, shared by
// incident_angle and the loss-landscape simulation.
namespace cubic {

inline constexpr double kLinearK1Epsilon = 1e-14;

// Value of eta + k1 eta^3 at the fold for k1 < 0.
double fold_g(double k1);

// Root on the increasing branch, for g within range; Newton-polished.
// Precondition: g >= 0 and (k1 >= 0 or g <= fold_g(k1)).
double monotone_root(double k1, double g);

// The unique real root when the discriminant is positive: k1 > 0 (any g),
// or k1 < 0 with g beyond the fold (where the root is negative).
double single_real_root(double k1, double g);

// Largest of the three real roots (principal trigonometric branch) when
// k1 < 0 and g is within the fold.
double principal_trig_root(double k1, double g);

}  // namespace cubic
}  // namespace gencam

#include "gencam/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "gencam/geometry.hpp"

namespace gencam {

const char* projection_kind_name(ProjectionKind kind) {
    switch (kind) {
        case ProjectionKind::GenericCubic: return "generic-cubic";
        case ProjectionKind::Stereographic: return "stereographic";
        case ProjectionKind::Equidistance: return "equidistance";
        case ProjectionKind::EquisolidAngle: return "equisolid-angle";
        case ProjectionKind::Orthogonal: return "orthogonal";
    }
    return "unknown";
}

double eta_monotone_limit(const ProjectionModel& model) {
    switch (model.kind) {
        case ProjectionKind::GenericCubic:
            if (model.k1 < -cubic::kLinearK1Epsilon)
                return std::sqrt(-1.0 / (3.0 * model.k1));
            return std::numeric_limits<double>::infinity();
        case ProjectionKind::Stereographic:
        case ProjectionKind::EquisolidAngle:
            return kPi;
        case ProjectionKind::Equidistance:
            return std::numeric_limits<double>::infinity();
        case ProjectionKind::Orthogonal:
            return kPi / 2.0;
    }
    return 0.0;
}

double eta_valid(const ProjectionModel& model, double eta_max_rad) {
    return std::min(eta_max_rad, eta_monotone_limit(model));
}

double radial_distance(const ProjectionModel& model, double eta_rad) {
    if (eta_rad < 0.0)
        throw std::domain_error("radial_distance: negative incident angle");
    if (eta_rad > eta_monotone_limit(model) + 1e-12)
        throw std::domain_error("radial_distance: incident angle beyond the monotone range of " +
                                std::string(projection_kind_name(model.kind)));
    const double f = model.focal_mm;
    switch (model.kind) {
        case ProjectionKind::GenericCubic:
            return f * (eta_rad + model.k1 * eta_rad * eta_rad * eta_rad);
        case ProjectionKind::Stereographic:
            return 2.0 * f * std::tan(eta_rad / 2.0);
        case ProjectionKind::Equidistance:
            return f * eta_rad;
        case ProjectionKind::EquisolidAngle:
            return 2.0 * f * std::sin(eta_rad / 2.0);
        case ProjectionKind::Orthogonal:
            return f * std::sin(eta_rad);
    }
    return 0.0;
}

namespace cubic {

double fold_g(double k1) {
    const double lim = std::sqrt(-1.0 / (3.0 * k1));
    return lim + k1 * lim * lim * lim;  // = (2/3) lim
}

namespace {

// One Newton step is enough to polish a closed-form root to full precision;
// two cover ill-conditioned k1 near zero.
double polish(double k1, double g, double t) {
    for (int i = 0; i < 2; ++i) {
        const double d = 1.0 + 3.0 * k1 * t * t;
        if (std::abs(d) < 1e-14) break;
        t -= (t + k1 * t * t * t - g) / d;
    }
    return t;
}

}  // namespace

double monotone_root(double k1, double g) {
    if (std::abs(k1) < kLinearK1Epsilon) return g;
    double t;
    if (k1 > 0.0) {
        t = single_real_root(k1, g);
    } else {
        const double lim = std::sqrt(-1.0 / (3.0 * k1));
        const double p = 1.0 / k1;
        const double q = -g / k1;
        const double m = std::sqrt(-p / 3.0);
        double c = -q / (2.0 * m * m * m);
        c = std::max(-1.0, std::min(1.0, c));
        const double phi = std::acos(c);
        // Middle of the three real roots lies on [0, fold].
        t = 2.0 * m * std::cos(phi / 3.0 - 2.0 * kPi / 3.0);
        t = std::max(0.0, std::min(t, lim));
        t = polish(k1, g, t);
        return std::max(0.0, std::min(t, lim));
    }
    return std::max(0.0, polish(k1, g, t));
}

double single_real_root(double k1, double g) {
    const double p = 1.0 / k1;
    const double q = -g / k1;
    const double disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    const double sd = std::sqrt(std::max(disc, 0.0));
    if (k1 > 0.0) {
        // -q/2 >= 0 here; the A - p/(3A) form avoids the cancelling cbrt pair.
        const double a = std::cbrt(-q / 2.0 + sd);
        double t = (a == 0.0) ? 0.0 : a - p / (3.0 * a);
        return polish(k1, g, t);
    }
    double t = std::cbrt(-q / 2.0 + sd) + std::cbrt(-q / 2.0 - sd);
    return polish(k1, g, t);
}

double principal_trig_root(double k1, double g) {
    const double p = 1.0 / k1;
    const double q = -g / k1;
    const double m = std::sqrt(-p / 3.0);
    double c = -q / (2.0 * m * m * m);
    c = std::max(-1.0, std::min(1.0, c));
    const double phi = std::acos(c);
    double t = 2.0 * m * std::cos(phi / 3.0);
    return polish(k1, g, t);
}

}  // namespace cubic

double incident_angle(const ProjectionModel& model, double gamma_mm) {
    if (gamma_mm < 0.0)
        throw std::domain_error("incident_angle: negative radial distance");
    const double f = model.focal_mm;
    const double g = gamma_mm / f;
    switch (model.kind) {
        case ProjectionKind::GenericCubic: {
            const double k1 = model.k1;
            if (k1 < -cubic::kLinearK1Epsilon && g > cubic::fold_g(k1) + 1e-12)
                throw std::domain_error("incident_angle: radial distance beyond the image circle");
            return cubic::monotone_root(k1, g);
        }
        case ProjectionKind::Stereographic:
            return 2.0 * std::atan(g / 2.0);
        case ProjectionKind::Equidistance:
            return g;
        case ProjectionKind::EquisolidAngle: {
            const double s = g / 2.0;
            if (s > 1.0 + 1e-12)
                throw std::domain_error("incident_angle: radial distance beyond the image circle");
            return 2.0 * std::asin(std::min(s, 1.0));
        }
        case ProjectionKind::Orthogonal: {
            // asin argument clamped to absorb rounding at eta = 90 degrees.
            if (g > 1.0 + 1e-12)
                throw std::domain_error("incident_angle: radial distance beyond the image circle");
            return std::asin(std::max(-1.0, std::min(g, 1.0)));
        }
    }
    return 0.0;
}

}  // namespace gencam

#include "gencam/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gencam/geometry.hpp"

namespace gencam {

namespace {

struct Quadrature {
    std::vector<double> eta;
    std::vector<double> weight;  // trapezoid weights over [0, pi/2]
};

Quadrature make_quadrature(int steps) {
    if (steps < 100) throw std::invalid_argument("quadrature_steps must be >= 100");
    Quadrature q;
    const int n = steps + 1;
    const double h = (kPi / 2.0) / steps;
    q.eta.resize(n);
    q.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        q.eta[i] = i * h;
        q.weight[i] = (i == 0 || i == steps) ? h / 2.0 : h;
    }
    q.eta.back() = kPi / 2.0;
    return q;
}

std::vector<double> evaluate_profile(const ProjectionModel& m, const Quadrature& q) {
    std::vector<double> g(q.eta.size());
    for (std::size_t i = 0; i < q.eta.size(); ++i) g[i] = radial_distance(m, q.eta[i]);
    return g;
}

// Mean absolute gap in mm between a cubic with linear parameters (a, b) =
// (f, f*k1) and reference values r at the quadrature nodes.
double fit_objective_mm(double a, double b, const Quadrature& q, const std::vector<double>& r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.eta.size(); ++i) {
        const double e = q.eta[i];
        acc += q.weight[i] * std::abs(a * e + b * e * e * e - r[i]);
    }
    return acc / (kPi / 2.0);
}

// Exact minimizer of sum_i w_i |t - t_i|: the weighted median.
double weighted_median(std::vector<std::pair<double, double>>& value_weight) {
    std::sort(value_weight.begin(), value_weight.end());
    double total = 0.0;
    for (const auto& vw : value_weight) total += vw.second;
    double run = 0.0;
    for (const auto& vw : value_weight) {
        run += vw.second;
        if (run >= total / 2.0) return vw.first;
    }
    return value_weight.back().first;
}

}  // namespace

std::vector<ProjectionKind> trigonometric_kinds() {
    return {ProjectionKind::Stereographic, ProjectionKind::Equidistance,
            ProjectionKind::EquisolidAngle, ProjectionKind::Orthogonal};
}

ModelComparison compare_models(const ProjectionModel& a, const ProjectionModel& b,
                               double pitch_mm, int quadrature_steps) {
    if (pitch_mm <= 0.0) throw std::invalid_argument("pixel pitch must be positive");
    const Quadrature q = make_quadrature(quadrature_steps);
    const std::vector<double> ga = evaluate_profile(a, q);
    const std::vector<double> gb = evaluate_profile(b, q);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.eta.size(); ++i) acc += q.weight[i] * std::abs(ga[i] - gb[i]);
    const double mean_mm = acc / (kPi / 2.0);
    return {a, b, mean_mm / pitch_mm, pitch_mm};
}

FitResult fit_generic(const ProjectionModel& reference, int quadrature_steps) {
    if (reference.kind == ProjectionKind::GenericCubic)
        throw std::invalid_argument("fit_generic expects a trigonometric reference model");
    const Quadrature q = make_quadrature(quadrature_steps);
    const std::vector<double> r = evaluate_profile(reference, q);

    // Dense grid pass over (f, k1).
    constexpr int kGrid = 300;
    const double f_lo = 1.0, f_hi = 30.0;
    const double k_lo = -1.0 / 3.0, k_hi = 2.0 / 3.0;
    double best_a = reference.focal_mm, best_b = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double f = f_lo + (f_hi - f_lo) * i / (kGrid - 1);
        for (int j = 0; j < kGrid; ++j) {
            const double k1 = k_lo + (k_hi - k_lo) * j / (kGrid - 1);
            const double v = fit_objective_mm(f, f * k1, q, r);
            if (v < best) {
                best = v;
                best_a = f;
                best_b = f * k1;
            }
        }
    }

    // Coordinate descent with exact weighted-median updates in (a, b); the
    // objective is jointly convex there.
    double a = best_a, b = best_b;
    std::vector<std::pair<double, double>> vw;
    vw.reserve(q.eta.size());
    for (int iter = 0; iter < 5000; ++iter) {
        const double prev_a = a, prev_b = b;
        vw.clear();
        for (std::size_t i = 1; i < q.eta.size(); ++i) {
            const double e = q.eta[i];
            vw.emplace_back((r[i] - b * e * e * e) / e, q.weight[i] * e);
        }
        a = weighted_median(vw);
        vw.clear();
        for (std::size_t i = 1; i < q.eta.size(); ++i) {
            const double e = q.eta[i];
            vw.emplace_back((r[i] - a * e) / (e * e * e), q.weight[i] * e * e * e);
        }
        b = weighted_median(vw);
        if (std::abs(a - prev_a) + std::abs(b - prev_b) < 1e-11 * std::max(1.0, std::abs(a))) break;
    }

    FitResult out;
    out.reference = reference;
    out.fitted_f_mm = a;
    out.fitted_k1 = (a != 0.0) ? b / a : 0.0;
    out.residual_px = fit_objective_mm(a, b, q, r) / kComparisonPitchMm;
    return out;
}

}  // namespace gencam

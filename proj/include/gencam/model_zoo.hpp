#pragma once

#include <vector>

#include "gencam/projection.hpp"

namespace gencam {

// Default normalization for pixel-valued comparisons: mid-range focal length
// and the 24 mm sensor at 224 px.
inline constexpr double kComparisonFocalMm = 10.5;
inline constexpr double kComparisonPitchMm = 24.0 / 224.0;

struct ModelComparison {
    ProjectionModel model_a;
    ProjectionModel model_b;
    double mean_abs_error_px = 0.0;
    double pixel_pitch_mm = kComparisonPitchMm;
};

struct FitResult {
    ProjectionModel reference;
    double fitted_f_mm = 0.0;
    double fitted_k1 = 0.0;
    double residual_px = 0.0;
};

// Mean absolute gap between two radial profiles over incident angles
// [0, pi/2], by composite trapezoid, reported in pixels at pitch_mm.
ModelComparison compare_models(const ProjectionModel& a, const ProjectionModel& b,
                               double pitch_mm, int quadrature_steps);

// Best generic-cubic approximation of a trigonometric reference model:
// minimizes the same mean absolute gap over (f, k1). Dense grid search
// refined by exact weighted-median coordinate descent on the linear
// parameters (a, b) = (f, f*k1).
FitResult fit_generic(const ProjectionModel& reference, int quadrature_steps);

std::vector<ProjectionKind> trigonometric_kinds();

}  // namespace gencam

#pragma once

#include "vpmcf/field.hpp"

#include <array>
#include <variant>
#include <vector>

namespace vpmcf {

struct Ball {
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double radius = 0.0;

    bool operator==(const Ball&) const = default;
};

/// Disjoint union of balls; the signed distance is the min over components.
struct BallUnion {
    std::vector<Ball> balls;
};

/// Axis-aligned ellipse, d = 2 only.
struct Ellipse {
    std::array<double, 3> center{0.5, 0.5, 0.5};
    std::array<double, 3> semi_axes{0.0, 0.0, 0.0};
};

/// Shape given by a sampled level-set function (positive inside); the zero
/// level defines the boundary. Must be sampled on the target grid.
struct ImplicitShape {
    ScalarField level_set;
};

using ShapeSpec = std::variant<Ball, BallUnion, Ellipse, ImplicitShape>;

/// Sign convention: positive inside the shape, negative outside.
struct SignedDistanceField {
    ScalarField r;
    double smoothing_band = 0.0; ///< K*eps once smooth_saturate has run, else 0
};

/// Exact distance from a point (relative coordinates, already min-imaged) to
/// the boundary of the axis-aligned ellipse with semi-axes (a, b). Newton on
/// the boundary-projection stationarity equation with bisection fallback.
double ellipse_boundary_distance(double px, double py, double a, double b);

/// Throws ValidationError unless the shape sits in (0,1)^d with >= 4*eps
/// clearance from the periodic seam (and union components are disjoint).
void validate_shape(const ShapeSpec& shape, double eps, const GridSpec& grid);

SignedDistanceField signed_distance(const ShapeSpec& shape, const GridSpec& grid);

/// rbar = K*eps*tanh(r/(K*eps)): keeps sign and zero set, |grad rbar| <= |grad r|,
/// saturates at +-K*eps. Requires K >= 5.
SignedDistanceField smooth_saturate(const SignedDistanceField& r, double eps, double K);

/// Well-prepared initial field phi0 = q^eps(rbar). Requires eps >= 3h.
ScalarField make_initial(const ShapeSpec& shape, double eps, const GridSpec& grid, double K = 8.0);

struct WellPreparednessReport {
    double max_discrepancy = 0.0;     ///< max over nodes of eps|grad phi|^2/2 - W/eps
    double max_discrepancy_rel = 0.0; ///< same, normalized by (W/eps + 1)
    double density_ratio_sup = 0.0;   ///< sup of mu0(B_R)/(omega_{d-1} R^{d-1})
    double omega = 0.0;               ///< 2/3 - |integral k(phi0)|
    double max_grad_rbar = 0.0;       ///< from atanh inversion where |phi| <= 0.99
    bool fatal = false;               ///< omega <= 0: multiplier estimate degenerates
    bool warn_small_omega = false;    ///< omega <= 0.01
};

WellPreparednessReport check_well_prepared(const ScalarField& phi0, double eps, Discretization disc);

} // namespace vpmcf

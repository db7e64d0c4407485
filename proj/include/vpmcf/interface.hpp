#pragma once

#include "vpmcf/field.hpp"

#include <array>
#include <vector>

namespace vpmcf {

/// Zero crossings of phi along grid edges (linear interpolation), as torus
/// coordinates. Unused coordinate slots are zero.
std::vector<std::array<double, 3>> zero_crossings(const ScalarField& phi);

struct Segment {
    std::array<double, 3> a{};
    std::array<double, 3> b{};
};

/// Marching-segments reconstruction of the zero level set (d = 2 only).
std::vector<Segment> zero_segments(const ScalarField& phi);

/// d = 2: total marching-segments polyline length of the zero level.
/// d = 1: number of sign changes. d = 3: co-area estimate (1/sigma) integral
/// sqrt(2W(phi)) |grad phi| (equals the area for well-prepared profiles).
double interface_measure(const ScalarField& phi, double eps, Discretization disc);

struct FittedSphere {
    std::array<double, 3> center{};
    double radius = 0.0;
    double rms = 0.0;
    std::size_t points = 0;
};

/// Clusters edge crossings (union-find with linking radius link_factor*h) and
/// least-squares fits a circle/sphere per component. Sorted by point count,
/// largest first.
std::vector<FittedSphere> fit_interface_spheres(const ScalarField& phi, double link_factor = 3.0);

} // namespace vpmcf

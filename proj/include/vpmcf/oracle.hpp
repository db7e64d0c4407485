#pragma once

#include "vpmcf/error.hpp"

#include <limits>
#include <vector>

namespace vpmcf {

enum class SharpLaw {
    volume_preserving, ///< dR_i/dt = -(d-1)/R_i + (d-1) sum R^{d-2} / sum R^{d-1}
    plain_mcf          ///< dR_i/dt = -(d-1)/R_i
};

/// Radii of k disjoint, non-interacting spheres under the sharp-interface law.
struct OracleSystem {
    int d = 2;
    SharpLaw law = SharpLaw::volume_preserving;
    std::vector<double> radii;
};

std::vector<double> oracle_rhs(const OracleSystem& sys, const std::vector<double>& radii);

/// sum of R_i^d, proportional to the total enclosed volume.
double conserved_volume_sum(const OracleSystem& sys, const std::vector<double>& radii);

struct OracleTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> radii;  ///< per time
    std::vector<std::vector<double>> derivs; ///< rhs at each stored point
    bool extinct = false;
    double extinction_time = std::numeric_limits<double>::infinity();
    int extinct_component = -1;

    /// Cubic Hermite interpolation of the radii at time t (t within range).
    std::vector<double> radii_at(double t) const;
};

/// Classical RK4 with step-doubling adaptivity. For the volume-preserving law
/// the conservation of sum R^d is monitored to 1e-10 relative as a self-check.
/// On extinction the trajectory is truncated at the extinction time and flagged.
/// max_dt > 0 caps the step (useful to densify records for interpolation).
OracleTrajectory oracle_integrate(const OracleSystem& sys, double T, double max_dt = 0.0,
                                  double rel_tol = 1e-12);

/// Closed form for the plain-MCF sphere: sqrt(R0^2 - 2(d-1) t).
double mcf_radius_closed_form(double r0, double t, int d);

/// First time the given component's radius reaches `target` (from above).
/// Throws NumericalError if it does not happen before t_max.
double time_radius_reaches(const OracleSystem& sys, std::size_t component, double target,
                           double t_max);

} // namespace vpmcf

#pragma once

#include "vpmcf/field.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace vpmcf {

/// Diffuse energy density e_eps = eps|grad phi|^2/2 + W(phi)/eps (not sigma-normalized).
ScalarField energy_density(const ScalarField& phi, double eps, Discretization disc);

/// mu_t(Omega) = (1/sigma) * integral of e_eps.
double energy(const ScalarField& phi, double eps, Discretization disc);

/// Conserved quantity: integral of k(phi).
double volume(const ScalarField& phi);

/// max over nodes of the discrepancy xi = eps|grad phi|^2/2 - W(phi)/eps.
double discrepancy_max(const ScalarField& phi, double eps, Discretization disc);

/// Same, normalized nodewise by (W(phi)/eps + 1).
double discrepancy_max_rel(const ScalarField& phi, double eps, Discretization disc);

/// |E1 - E0 + (dt/sigma) * integral eps ((phi1-phi0)/dt)^2| for one step pair.
double dissipation_residual(const ScalarField& phi0, const ScalarField& phi1, double eps,
                            Discretization disc, double dt);

/// (1/sigma) * integral eps (Lap phi - W'(phi)/eps^2)^2, the diffuse analogue
/// of the mean-curvature square integral against mu_t.
double curvature_l2(const ScalarField& phi, double eps, Discretization disc);

/// v = (-(phi1-phi0)/dt / |grad|) * grad/|grad| on the averaged field; zero
/// branch where |grad phi| < 1e-8/h.
VectorField velocity_field(const ScalarField& phi0, const ScalarField& phi1, double dt,
                           Discretization disc);

// --- density-ratio scan ---------------------------------------------------

struct DensityScanEntry {
    std::array<double, 3> center{};
    double radius = 0.0;
    double ratio = 0.0;
};

struct DensityScanReport {
    std::vector<DensityScanEntry> entries;
    double sup = 0.0;
    std::array<double, 3> argsup_center{};
    double argsup_radius = 0.0;
};

struct CentersSpec {
    int lattice_per_axis = 8;
    bool include_interface = true;
    std::size_t max_interface_points = 128;
    std::vector<std::array<double, 3>> extra;
};

/// {2h, 4h, 8h, ...} strictly below 1/4.
std::vector<double> dyadic_radii(const GridSpec& grid);

/// Unit-ball volume in dimension m (omega_0 = 1, omega_1 = 2, omega_2 = pi).
double unit_ball_volume(int m);

/// mu(B_R(x)) by node masking in the periodic metric, for precomputed e_eps/sigma.
double ball_measure(const ScalarField& density_over_sigma, const std::array<double, 3>& center,
                    double radius);

/// (center, radius) pairs may be evaluated by `threads` workers; every entry
/// lands in a preassigned slot and the sup reduction runs in fixed order, so
/// the report is identical for any thread count.
DensityScanReport density_scan(const ScalarField& phi, double eps, Discretization disc,
                               const std::vector<double>& radii, const CentersSpec& centers,
                               int threads = 1);

// --- localized monotonicity -----------------------------------------------

/// Radial C^2 cutoff: 1 on [0,1/4], 0 on [1/2,inf), quintic smoothstep between.
double cutoff_eta(double r);

struct MonotonicityKernel {
    std::array<double, 3> y{};
    double s = 0.0; ///< reference time, must exceed the evaluation time
};

/// rho~_{y,s}(x,t) with the periodic minimum-image distance.
double rho_tilde(const MonotonicityKernel& kernel, const std::array<double, 3>& x, double t, int d);

/// integral of rho~ d mu_t; `masked` selects mask-then-integrate vs
/// integrate-weighted (both must agree, kept as a consistency channel).
double weighted_measure(const ScalarField& phi, double eps, Discretization disc,
                        const MonotonicityKernel& kernel, double t, bool masked = false);

struct HistorySnapshot {
    double t = 0.0;
    ScalarField phi;
    double lambda = 0.0;
    double lambda_sq_accum = 0.0; ///< running integral of lambda^2 dt
};

struct RunHistory {
    double eps = 0.0;
    Discretization disc = Discretization::spectral;
    std::vector<HistorySnapshot> snaps;
};

struct MonotonicityResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; ///< rhs - lhs
};

/// Checks the localized monotonicity inequality between two stored times.
/// i1/i2 index history snapshots, t1 < t2 < kernel.s required. The time
/// integral of the cutoff remainder term uses the trapezoid rule over stored
/// records; the lambda^2 integral uses the exact per-step accumulator.
MonotonicityResult monotonicity_check(const RunHistory& history, const MonotonicityKernel& kernel,
                                      std::size_t i1, std::size_t i2, double c5);

// --- per-record diagnostics -----------------------------------------------

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double volume = 0.0;
    double lambda = 0.0;
    double lambda_sq_accum = 0.0;
    double max_discrepancy = 0.0;
    double dissipation_residual = 0.0; ///< interval residual vs previous record
    double curvature_l2 = 0.0;
    double max_abs_phi = 0.0;
    double interface_measure = 0.0;
};

std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

} // namespace vpmcf

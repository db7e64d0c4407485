#pragma once

#include "vpmcf/field.hpp"
#include "vpmcf/multiplier.hpp"
#include "vpmcf/shape.hpp"
#include "vpmcf/stepper.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vpmcf {

struct ShapeConfig {
    std::string kind = "ball"; ///< ball | balls | ellipse | implicit
    std::vector<double> center{0.5, 0.5, 0.5};
    double radius = 0.25;
    std::vector<Ball> balls;
    std::vector<double> semi_axes{0.25, 0.15, 0.0};
    std::string level_set_snapshot; ///< path to a VPMF file, zero level = boundary

    bool operator==(const ShapeConfig&) const = default;
};

/// Flat key-value configuration with sections; see docs/config reference in
/// the README. parse(serialize(c)) == c.
struct RunConfig {
    // [grid]
    int d = 2;
    int n = 128;
    Discretization disc = Discretization::spectral;
    // [shape]
    ShapeConfig shape;
    // [initial]
    double eps = 0.03125;
    double saturation_k = 8.0;
    // [evolution]
    EquationVariant variant = EquationVariant::golovaty;
    Scheme scheme = Scheme::semi_implicit_spectral;
    MultiplierMode multiplier_mode = MultiplierMode::conservative;
    double dt = 0.0; ///< 0 = auto: half of the stability limit
    double conservative_tol = 1e-12;
    double T = 0.01;
    // [output]
    std::string output_dir = "out";
    long csv_cadence = 10;
    long snapshot_cadence = 0; ///< 0 disables snapshots
    // [diagnostics]
    bool density_scan_enabled = true;
    std::vector<double> density_radii; ///< empty = dyadic defaults
    int density_centers = 8;
    int monotonicity_samples = 0;
    double monotonicity_c5 = 1e3;
    std::uint64_t monotonicity_seed = 12345;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

/// Applies every module precondition that does not require reading field data.
void validate_config(const RunConfig& cfg);

/// Effective dt (auto rule applied).
double effective_dt(const RunConfig& cfg);

/// Builds the ShapeSpec; loads the level-set snapshot for implicit shapes.
ShapeSpec build_shape(const RunConfig& cfg, const GridSpec& grid);

const char* to_string(EquationVariant v);
const char* to_string(Scheme s);
const char* to_string(MultiplierMode m);
const char* to_string(Discretization d);

} // namespace vpmcf

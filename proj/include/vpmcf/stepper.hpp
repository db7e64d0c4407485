#pragma once

#include "vpmcf/diagnostics.hpp"
#include "vpmcf/field.hpp"
#include "vpmcf/multiplier.hpp"

#include <functional>
#include <vector>

namespace vpmcf {

enum class Scheme { explicit_euler, semi_implicit_spectral };
enum class MultiplierMode { analytic, conservative };

struct StepperSpec {
    Scheme scheme = Scheme::semi_implicit_spectral;
    double dt = 0.0;
    MultiplierMode multiplier_mode = MultiplierMode::analytic;
    double conservative_tol = 1e-12;
    double stability_safety = 0.2; ///< fraction of the formal stability limit
};

struct EvolutionState {
    ScalarField phi;
    double t = 0.0;
    double eps = 0.0;
    EquationVariant variant = EquationVariant::golovaty;
    double volume_target = 0.0;     ///< V0, pinned at construction
    double lambda_sq_accum = 0.0;   ///< integral of lambda^2 dt
    double dissipation_accum = 0.0; ///< integral of eps * phi_t^2 dx dt (not sigma-normalized)
    double last_lambda = 0.0;
    double max_abs_phi = 0.0;
    long overshoot_events = 0; ///< steps with max|phi| > 1 + 1e-6
    long clamp_events = 0;     ///< k-clamp tally accumulated over the run
    long step_index = 0;
};

EvolutionState make_state(ScalarField phi0, double t0, double eps, EquationVariant variant);

/// Largest admissible dt: safety * min(h^2/(2d), eps^2/2) explicit,
/// safety * eps^2/2 semi-implicit.
double stability_limit(const StepperSpec& spec, const GridSpec& grid, double eps);

/// Rejects invalid scheme/discretization pairings and over-limit dt.
void validate_stepper(const StepperSpec& spec, const GridSpec& grid, double eps,
                      EquationVariant variant, Discretization disc);

/// One time step, optionally with a shortened dt (final partial step).
void step(EvolutionState& state, const StepperSpec& spec, Discretization disc,
          double dt_override = -1.0);

struct RunResult {
    EvolutionState state;
    std::vector<DiagnosticsRecord> records;
};

using RecordHook = std::function<void(const EvolutionState&, const DiagnosticsRecord&)>;
using StepHook = std::function<void(const EvolutionState&)>;

/// Advances to time T, emitting a DiagnosticsRecord at t0, every `cadence`
/// steps and at T. Deterministic for fixed inputs. Step failures are
/// propagated with the step index attached. `per_step` fires after every
/// accepted step (snapshot cadences are decoupled from the CSV cadence).
RunResult run(EvolutionState state, const StepperSpec& spec, Discretization disc, double T,
              long cadence, const RecordHook& hook = {}, const StepHook& per_step = {});

} // namespace vpmcf

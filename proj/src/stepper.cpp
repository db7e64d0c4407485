#include "vpmcf/stepper.hpp"

#include "vpmcf/fft.hpp"
#include "vpmcf/interface.hpp"
#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace vpmcf {

EvolutionState make_state(ScalarField phi0, double t0, double eps, EquationVariant variant) {
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("EvolutionState: eps must lie in (0,1)");
    require_finite(phi0, "make_state");
    EvolutionState s;
    s.phi = std::move(phi0);
    s.t = t0;
    s.eps = eps;
    s.variant = variant;
    s.volume_target = volume(s.phi);
    s.max_abs_phi = max_abs(s.phi);
    return s;
}

double stability_limit(const StepperSpec& spec, const GridSpec& grid, double eps) {
    const double reaction = 0.5 * eps * eps;
    if (spec.scheme == Scheme::explicit_euler) {
        const double diffusion = grid.h * grid.h / (2.0 * grid.d);
        return spec.stability_safety * std::min(diffusion, reaction);
    }
    return spec.stability_safety * reaction;
}

void validate_stepper(const StepperSpec& spec, const GridSpec& grid, double eps,
                      EquationVariant variant, Discretization disc) {
    if (!(spec.dt > 0.0)) throw ValidationError("stepper: dt must be positive");
    const double limit = stability_limit(spec, grid, eps);
    if (spec.dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "stepper: dt = " << spec.dt << " exceeds the stability bound " << limit;
        throw ValidationError(os.str());
    }
    if (spec.scheme == Scheme::semi_implicit_spectral && disc != Discretization::spectral)
        throw ValidationError("stepper: semi-implicit-spectral requires the spectral discretization");
    if (spec.scheme == Scheme::semi_implicit_spectral && !is_pow2(static_cast<std::uint64_t>(grid.n)))
        throw ValidationError("stepper: semi-implicit-spectral requires a power-of-two grid");
    if (spec.multiplier_mode == MultiplierMode::conservative &&
        variant == EquationVariant::plain_allen_cahn)
        throw ValidationError("stepper: conservative mode needs a variant with a multiplier");
    if (!(spec.conservative_tol > 0.0)) throw ValidationError("stepper: conservative_tol must be positive");
}

namespace {

// forcing shape in front of the multiplier: sqrt(2W) for golovaty/bb, 1 for rs
void multiplier_shape(EquationVariant variant, const ScalarField& phi, ScalarField& out) {
    switch (variant) {
        case EquationVariant::golovaty:
        case EquationVariant::brassel_bretin:
            for (std::size_t i = 0; i < phi.size(); ++i) out[i] = eval_sqrt2W(phi[i]);
            break;
        case EquationVariant::rubinstein_sternberg:
            for (std::size_t i = 0; i < phi.size(); ++i) out[i] = 1.0;
            break;
        case EquationVariant::plain_allen_cahn:
            for (std::size_t i = 0; i < phi.size(); ++i) out[i] = 0.0;
            break;
    }
}

double volume_of_combination(const ScalarField& a, const ScalarField& b, double lam) {
    return integrate_nodal(a.grid, [&](std::size_t i) { return eval_k(a[i] + lam * b[i]); });
}

/// Root of Q(lam) = integral k(A + lam B) - V0. Q is nondecreasing in lam
/// (B >= 0), so a sign-changing bracket pins the root. Secant iteration seeded
/// at the analytic multiplier, bisection fallback.
double solve_conservative_lambda(const ScalarField& a, const ScalarField& b, double v0,
                                 double seed, double tol, long step_index) {
    auto Q = [&](double lam) { return volume_of_combination(a, b, lam) - v0; };

    double x0 = seed, q0 = Q(x0);
    if (std::abs(q0) <= tol) return x0;
    double x1 = seed + std::max(1e-9, 1e-6 * std::abs(seed));
    double q1 = Q(x1);

    double blo = 0.0, bhi = 0.0; // bracket endpoints once a sign change is seen
    bool have_bracket = false;
    auto note = [&](double x, double q) {
        if (!have_bracket) {
            if (q0 * q < 0.0) { blo = std::min(x0, x); bhi = std::max(x0, x); have_bracket = true; }
            else if (q1 * q < 0.0) { blo = std::min(x1, x); bhi = std::max(x1, x); have_bracket = true; }
        } else {
            // shrink: Q nondecreasing, keep the sign-consistent side
            if (q < 0.0) blo = std::max(blo, x); else bhi = std::min(bhi, x);
        }
    };
    if (q0 * q1 < 0.0) { blo = std::min(x0, x1); bhi = std::max(x0, x1); have_bracket = true; }

    for (int it = 0; it < 50; ++it) {
        if (std::abs(q1) <= tol) return x1;
        double next;
        const double dq = q1 - q0;
        if (dq != 0.0) {
            next = x1 - q1 * (x1 - x0) / dq;
            if (have_bracket && !(next > blo && next < bhi)) next = 0.5 * (blo + bhi);
        } else if (have_bracket) {
            next = 0.5 * (blo + bhi);
        } else {
            // expand outward until the sign flips
            double width = std::max(1.0, std::abs(x1));
            double lo = x1, hi = x1, qlo = q1, qhi = q1;
            bool found = false;
            for (int k = 0; k < 40 && !found; ++k) {
                lo -= width; hi += width; width *= 2.0;
                qlo = Q(lo); qhi = Q(hi);
                if (qlo * q1 < 0.0) { blo = lo; bhi = x1; found = true; }
                else if (qhi * q1 < 0.0) { blo = x1; bhi = hi; found = true; }
            }
            if (!found) {
                std::ostringstream os;
                os << "conservative multiplier: no sign change while bracketing; Q(" << lo
                   << ") = " << qlo << ", Q(" << hi << ") = " << qhi << ", seed " << seed;
                throw NumericalError(os.str(), step_index);
            }
            have_bracket = true;
            next = 0.5 * (blo + bhi);
        }
        const double qn = Q(next);
        note(next, qn);
        x0 = x1; q0 = q1;
        x1 = next; q1 = qn;
    }
    if (std::abs(q1) <= tol) return x1;
    std::ostringstream os;
    os << "conservative multiplier: secant did not converge in 50 iterations; last lambda = " << x1
       << ", residual = " << q1;
    if (have_bracket) os << ", bracket [" << blo << ", " << bhi << "]";
    throw NumericalError(os.str(), step_index);
}

} // namespace

void step(EvolutionState& state, const StepperSpec& spec, Discretization disc, double dt_override) {
    const double dt = dt_override > 0.0 ? dt_override : spec.dt;
    if (dt > spec.dt * (1.0 + 1e-12))
        throw ValidationError("step: dt override may only shorten the step");
    validate_stepper(spec, state.phi.grid, state.eps, state.variant, disc);

    const GridSpec& g = state.phi.grid;
    const ScalarField& phi = state.phi;
    const double eps = state.eps;
    const double inv_eps2 = 1.0 / (eps * eps);

    ScalarField shape(g);
    multiplier_shape(state.variant, phi, shape);

    ScalarField a(g); // drift part of the update
    ScalarField b(g); // multiplier response, phi^{n+1} = a + lambda * b
    double lambda_analytic = 0.0;

    if (spec.scheme == Scheme::explicit_euler) {
        const ScalarField lap = laplacian(phi, disc);
        if (state.variant == EquationVariant::golovaty)
            lambda_analytic = lambda_golovaty_form_a(phi, lap, eps);
        else
            lambda_analytic = analytic_multiplier(state.variant, phi, eps, disc);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            a[i] = phi[i] + dt * (lap[i] - eval_dW(phi[i]) * inv_eps2);
            b[i] = dt * shape[i] / eps;
        }
    } else {
        const Spectral& sp = Spectral::get(g);
        std::vector<std::complex<double>> spec_a(sp.complex_count());
        std::vector<std::complex<double>> spec_b(sp.complex_count());

        // lambda needs Lap phi; reuse the forward transform of phi
        std::vector<std::complex<double>> phi_hat(sp.complex_count());
        sp.forward(phi.v.data(), phi_hat.data());
        std::vector<std::complex<double>> lap_hat(phi_hat);
        sp.for_each_mode([&](std::size_t flat, int i0, int i1, int i2) {
            const double w0 = sp.wave(0, i0);
            double m = w0 * w0;
            if (g.d > 1) { const double w1 = sp.wave(1, i1); m += w1 * w1; }
            if (g.d > 2) { const double w2 = sp.wave(2, i2); m += w2 * w2; }
            lap_hat[flat] *= -m;
        });
        ScalarField lap(g);
        sp.inverse(lap_hat.data(), lap.v.data());
        if (state.variant == EquationVariant::golovaty)
            lambda_analytic = lambda_golovaty_form_a(phi, lap, eps);
        else if (state.variant == EquationVariant::rubinstein_sternberg)
            lambda_analytic = lambda_rs(phi, eps);
        else if (state.variant == EquationVariant::brassel_bretin)
            lambda_analytic = lambda_bb(phi, eps);

        ScalarField rhs(g);
        for (std::size_t i = 0; i < phi.size(); ++i)
            rhs[i] = phi[i] - dt * eval_dW(phi[i]) * inv_eps2;
        sp.forward(rhs.v.data(), spec_a.data());
        const bool needs_b = state.variant != EquationVariant::plain_allen_cahn;
        if (needs_b) {
            ScalarField bshape(g);
            for (std::size_t i = 0; i < phi.size(); ++i) bshape[i] = dt * shape[i] / eps;
            sp.forward(bshape.v.data(), spec_b.data());
        }
        // full |k|^2 in the resolvent: the top mode gets maximal damping
        sp.for_each_mode([&](std::size_t flat, int i0, int i1, int i2) {
            double m = sp.wave2_full(0, i0);
            if (g.d > 1) m += sp.wave2_full(1, i1);
            if (g.d > 2) m += sp.wave2_full(2, i2);
            const double inv = 1.0 / (1.0 + dt * m);
            spec_a[flat] *= inv;
            if (needs_b) spec_b[flat] *= inv;
        });
        sp.inverse(spec_a.data(), a.v.data());
        if (needs_b) sp.inverse(spec_b.data(), b.v.data());
    }

    const std::uint64_t clamps_before = potential_clamp_count();
    double lambda = lambda_analytic;
    if (spec.multiplier_mode == MultiplierMode::conservative &&
        state.variant != EquationVariant::plain_allen_cahn)
        lambda = solve_conservative_lambda(a, b, state.volume_target, lambda_analytic,
                                           spec.conservative_tol, state.step_index);

    double maxabs = 0.0;
    const double invdt = 1.0 / dt;
    double diss = 0.0;
    {
        ScalarField next(g);
        for (std::size_t i = 0; i < phi.size(); ++i) next[i] = a[i] + lambda * b[i];
        diss = integrate_nodal(g, [&](std::size_t i) {
            const double rate = (next[i] - phi[i]) * invdt;
            return eps * rate * rate;
        });
        maxabs = max_abs(next);
        if (!std::isfinite(maxabs))
            throw NumericalError("step: state became non-finite", state.step_index);
        state.phi = std::move(next);
    }

    state.t += dt;
    state.last_lambda = lambda;
    state.lambda_sq_accum += dt * lambda * lambda;
    state.dissipation_accum += dt * diss;
    state.max_abs_phi = std::max(state.max_abs_phi, maxabs);
    state.clamp_events += static_cast<long>(potential_clamp_count() - clamps_before);
    if (maxabs > 1.0 + 1e-6) ++state.overshoot_events;
    ++state.step_index;
}

RunResult run(EvolutionState state, const StepperSpec& spec, Discretization disc, double T,
              long cadence, const RecordHook& hook, const StepHook& per_step) {
    if (!(T >= state.t)) throw ValidationError("run: final time precedes the state time");
    if (cadence < 1) throw ValidationError("run: cadence must be >= 1");
    validate_stepper(spec, state.phi.grid, state.eps, state.variant, disc);

    RunResult out;
    double prev_energy = 0.0;
    double prev_diss_accum = 0.0;
    bool have_prev = false;

    auto emit = [&](const EvolutionState& s, double lambda_now) {
        DiagnosticsRecord r;
        r.t = s.t;
        r.energy = energy(s.phi, s.eps, disc);
        r.volume = volume(s.phi);
        r.lambda = lambda_now;
        r.lambda_sq_accum = s.lambda_sq_accum;
        r.max_discrepancy = discrepancy_max(s.phi, s.eps, disc);
        r.curvature_l2 = curvature_l2(s.phi, s.eps, disc);
        r.max_abs_phi = max_abs(s.phi);
        r.interface_measure = interface_measure(s.phi, s.eps, disc);
        if (have_prev)
            r.dissipation_residual =
                std::abs(r.energy - prev_energy + (s.dissipation_accum - prev_diss_accum) / sigma());
        prev_energy = r.energy;
        prev_diss_accum = s.dissipation_accum;
        have_prev = true;
        out.records.push_back(r);
        if (hook) hook(s, r);
    };

    double lambda0 = 0.0;
    try {
        lambda0 = analytic_multiplier(state.variant, state.phi, state.eps, disc);
    } catch (const NumericalError&) {
        lambda0 = std::numeric_limits<double>::quiet_NaN(); // degenerate initial state; recorded as-is
    }
    emit(state, lambda0);

    const double tiny = 1e-12 * std::max(1.0, std::abs(T));
    long steps_since_record = 0;
    while (state.t < T - tiny) {
        const double dt_n = std::min(spec.dt, T - state.t);
        try {
            step(state, spec, disc, dt_n);
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << e.what() << " (at step " << state.step_index << ", t = " << state.t << ")";
            throw NumericalError(os.str(), state.step_index);
        }
        if (per_step) per_step(state);
        ++steps_since_record;
        const bool at_end = state.t >= T - tiny;
        if (steps_since_record >= cadence || at_end) {
            emit(state, state.last_lambda);
            steps_since_record = 0;
        }
    }
    if (out.records.size() == 1 && state.t == out.records.front().t && T == state.t) {
        // T == t0: single record already emitted
    }
    out.state = std::move(state);
    return out;
}

} // namespace vpmcf

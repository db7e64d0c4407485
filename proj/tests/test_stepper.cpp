#include <catch2/catch_amalgamated.hpp>

#include "vpmcf/diagnostics.hpp"
#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"
#include "vpmcf/shape.hpp"
#include "vpmcf/stepper.hpp"

#include <cmath>

using namespace vpmcf;

namespace {

StepperSpec spec_for(Scheme scheme, const GridSpec& g, double eps,
                     MultiplierMode mode = MultiplierMode::analytic) {
    StepperSpec s;
    s.scheme = scheme;
    s.multiplier_mode = mode;
    s.dt = 0.9 * stability_limit(s, g, eps);
    return s;
}

EvolutionState interval_state(const GridSpec& g, double eps, EquationVariant v, double radius = 0.2) {
    auto phi = make_initial(ShapeSpec{Ball{{0.5, 0.0, 0.0}, radius}}, eps, g, 8.0);
    return make_state(std::move(phi), 0.0, eps, v);
}

} // namespace

TEST_CASE("stepper validation: stability bound, scheme pairing, conservative guard") {
    const GridSpec g = GridSpec::make(2, 64);
    const double eps = 4.0 * g.h;
    StepperSpec s;
    s.scheme = Scheme::explicit_euler;
    s.dt = 10.0 * stability_limit(s, g, eps);
    CHECK_THROWS_AS(validate_stepper(s, g, eps, EquationVariant::golovaty, Discretization::central2),
                    ValidationError);
    s.dt = 0.5 * stability_limit(s, g, eps);
    CHECK_NOTHROW(validate_stepper(s, g, eps, EquationVariant::golovaty, Discretization::central2));

    StepperSpec si;
    si.scheme = Scheme::semi_implicit_spectral;
    si.dt = 0.5 * stability_limit(si, g, eps);
    CHECK_THROWS_AS(validate_stepper(si, g, eps, EquationVariant::golovaty, Discretization::central2),
                    ValidationError);
    si.multiplier_mode = MultiplierMode::conservative;
    CHECK_THROWS_AS(
        validate_stepper(si, g, eps, EquationVariant::plain_allen_cahn, Discretization::spectral),
        ValidationError);
}

TEST_CASE("explicit stability limit covers diffusion and reaction") {
    const GridSpec fine = GridSpec::make(2, 128);
    StepperSpec s;
    s.scheme = Scheme::explicit_euler;
    CHECK(stability_limit(s, fine, 0.5) ==
          Catch::Approx(0.2 * fine.h * fine.h / 4.0)); // diffusion-limited
    const GridSpec coarse = GridSpec::make(2, 32);
    CHECK(stability_limit(s, coarse, 0.01) == Catch::Approx(0.2 * 0.5 * 1e-4)); // reaction-limited
    s.scheme = Scheme::semi_implicit_spectral;
    CHECK(stability_limit(s, fine, 0.01) == Catch::Approx(0.2 * 0.5 * 1e-4)); // no h^2 constraint
}

TEST_CASE("multiplier variants hold constant fields fixed to 1e-14 per step") {
    const GridSpec g = GridSpec::make(2, 32);
    const double eps = 0.1;
    const double constants[] = {-0.9, -0.5, 0.0, 0.5, 0.9};
    const EquationVariant variants[] = {EquationVariant::golovaty,
                                        EquationVariant::rubinstein_sternberg,
                                        EquationVariant::brassel_bretin};
    for (auto scheme : {Scheme::explicit_euler, Scheme::semi_implicit_spectral}) {
        for (auto v : variants) {
            for (double c : constants) {
                EvolutionState st = make_state(ScalarField(g, c), 0.0, eps, v);
                const StepperSpec sp = spec_for(scheme, g, eps);
                step(st, sp, Discretization::spectral);
                double worst = 0.0;
                for (double x : st.phi.v) worst = std::max(worst, std::abs(x - c));
                CAPTURE(static_cast<int>(scheme), static_cast<int>(v), c);
                CHECK(worst <= 1e-14);
            }
        }
    }
    // plain Allen-Cahn holds only the symmetric constant; W'(c) drives others
    EvolutionState sym = make_state(ScalarField(g, 0.0), 0.0, eps, EquationVariant::plain_allen_cahn);
    const StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps);
    step(sym, sp, Discretization::spectral);
    for (double x : sym.phi.v) CHECK(std::abs(x) <= 1e-14);
    EvolutionState off = make_state(ScalarField(g, 0.5), 0.0, eps, EquationVariant::plain_allen_cahn);
    step(off, sp, Discretization::spectral);
    CHECK(std::abs(off.phi[0] - 0.5) > 1e-6);
}

TEST_CASE("conservative mode pins the k-volume to the root tolerance") {
    const GridSpec g = GridSpec::make(1, 256);
    const double eps = 8.0 * g.h;
    for (auto v : {EquationVariant::golovaty, EquationVariant::rubinstein_sternberg,
                   EquationVariant::brassel_bretin}) {
        EvolutionState st = interval_state(g, eps, v);
        const double v0 = st.volume_target;
        const StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps,
                                        MultiplierMode::conservative);
        for (int k = 0; k < 40; ++k) {
            step(st, sp, Discretization::spectral);
            CHECK(std::abs(volume(st.phi) - v0) <= 1e-10);
        }
    }
}

TEST_CASE("analytic-mode volume drift is first order in dt") {
    const GridSpec g = GridSpec::make(1, 256);
    const double eps = 8.0 * g.h;
    auto drift = [&](double dt_scale) {
        EvolutionState st = interval_state(g, eps, EquationVariant::golovaty);
        const double v0 = st.volume_target;
        StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps);
        sp.dt *= 0.5 * dt_scale;
        const double T = 256.0 * sp.dt / dt_scale; // same horizon for both runs
        auto res = run(std::move(st), sp, Discretization::spectral, T, 1000);
        return std::abs(res.records.back().volume - v0);
    };
    const double d1 = drift(1.0);
    const double d2 = drift(0.5);
    CHECK(d1 / d2 > 1.7);
    CHECK(d1 / d2 < 2.3);
}

TEST_CASE("energy decreases monotonically for the semi-implicit golovaty flow") {
    const GridSpec g = GridSpec::make(1, 256);
    const double eps = 8.0 * g.h;
    EvolutionState st = interval_state(g, eps, EquationVariant::golovaty);
    const StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps,
                                    MultiplierMode::conservative);
    double prev = energy(st.phi, eps, Discretization::spectral);
    for (int k = 0; k < 120; ++k) {
        step(st, sp, Discretization::spectral);
        const double e = energy(st.phi, eps, Discretization::spectral);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
    CHECK(st.max_abs_phi <= 1.0 + 1e-6);
    CHECK(st.overshoot_events == 0);
}

TEST_CASE("dissipation residual shrinks at first order in dt") {
    const GridSpec g = GridSpec::make(1, 256);
    const double eps = 8.0 * g.h;
    auto residual_sum = [&](double dt_scale) {
        EvolutionState st = interval_state(g, eps, EquationVariant::golovaty);
        StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps);
        sp.dt *= dt_scale;
        const double T = 32.0 * sp.dt / dt_scale;
        auto res = run(std::move(st), sp, Discretization::spectral, T, 1);
        double acc = 0.0;
        for (const auto& r : res.records) acc += r.dissipation_residual;
        return acc;
    };
    const double r1 = residual_sum(1.0);
    const double r2 = residual_sum(0.5);
    CHECK(r1 / r2 > 1.6);
    CHECK(r1 / r2 < 2.6);
}

TEST_CASE("run: empty horizon, record cadence, determinism") {
    const GridSpec g = GridSpec::make(1, 128);
    const double eps = 8.0 * g.h;
    EvolutionState st = interval_state(g, eps, EquationVariant::golovaty);
    const StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps);

    auto res0 = run(st, sp, Discretization::spectral, 0.0, 5);
    CHECK(res0.records.size() == 1);
    CHECK(res0.state.t == 0.0);

    auto res1 = run(st, sp, Discretization::spectral, 20.0 * sp.dt, 5);
    CHECK(res1.records.size() == 1 + 4);

    auto res2 = run(st, sp, Discretization::spectral, 20.0 * sp.dt, 5);
    REQUIRE(res1.records.size() == res2.records.size());
    for (std::size_t i = 0; i < res1.records.size(); ++i) {
        CHECK(res1.records[i].energy == res2.records[i].energy); // bit-identical
        CHECK(res1.records[i].volume == res2.records[i].volume);
        CHECK(res1.records[i].lambda == res2.records[i].lambda);
    }
}

TEST_CASE("multiplier forms agree along a spectral run trajectory") {
    const GridSpec g = GridSpec::make(2, 128);
    const double eps = 4.0 * g.h;
    auto phi = make_initial(ShapeSpec{Ball{{0.5, 0.5, 0.0}, 0.25}}, eps, g, 8.0);
    EvolutionState st = make_state(std::move(phi), 0.0, eps, EquationVariant::golovaty);
    const StepperSpec sp = spec_for(Scheme::semi_implicit_spectral, g, eps,
                                    MultiplierMode::conservative);
    for (int k = 0; k < 30; ++k) step(st, sp, Discretization::spectral);
    const auto lam = lambda_golovaty(st.phi, eps, Discretization::spectral);
    CAPTURE(lam.form_a, lam.form_b);
    CHECK(std::abs(lam.form_a - lam.form_b) <= 1e-10 * std::abs(lam.form_a));
}

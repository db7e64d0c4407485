#include <catch2/catch_amalgamated.hpp>

#include "vpmcf/multiplier.hpp"
#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"
#include "vpmcf/shape.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace vpmcf;
using vpmcf::testing::random_smooth_field;
using vpmcf::testing::sample_field;

TEST_CASE("multipliers vanish on the symmetric state phi = 0") {
    const GridSpec g = GridSpec::make(2, 32);
    ScalarField zero(g, 0.0);
    const double eps = 0.05;
    const auto lam = lambda_golovaty(zero, eps, Discretization::spectral);
    CHECK(std::abs(lam.form_a) < 1e-13);
    CHECK(std::abs(lam.form_b) < 1e-13);
    CHECK(std::abs(lambda_rs(zero, eps)) < 1e-13);
    CHECK(std::abs(lambda_bb(zero, eps)) < 1e-13);
}

TEST_CASE("constant-field closed forms") {
    const GridSpec g = GridSpec::make(2, 32);
    ScalarField half(g, 0.5);
    const double eps = 0.05;
    const auto lam = lambda_golovaty(half, eps, Discretization::spectral);
    CHECK(lam.form_a == Catch::Approx(-1.0 / eps).epsilon(1e-12));
    CHECK(lam.form_b == Catch::Approx(-1.0 / eps).epsilon(1e-12));
    CHECK(lambda_rs(half, eps) == Catch::Approx(-0.75 / eps).epsilon(1e-12));
    CHECK(lambda_bb(half, eps) == Catch::Approx(-1.0 / eps).epsilon(1e-12));
}

TEST_CASE("antisymmetric fields have vanishing lambda_1") {
    const GridSpec g = GridSpec::make(1, 128);
    const auto phi = sample_field(g, [](const double* x) {
        return 0.8 * std::sin(2.0 * std::numbers::pi * x[0]);
    });
    CHECK(std::abs(lambda_rs(phi, 0.05)) < 1e-13);
}

TEST_CASE("degenerate states are rejected by the denominator guard") {
    const GridSpec g = GridSpec::make(1, 64);
    ScalarField ones(g, 1.0);
    CHECK_THROWS_AS(lambda_golovaty(ones, 0.05, Discretization::spectral), NumericalError);
    CHECK_THROWS_AS(lambda_bb(ones, 0.05), NumericalError);
    CHECK(lambda_rs(ones, 0.05) == Catch::Approx(0.0).margin(1e-14)); // W'(1) = 0, no guard needed
}

TEST_CASE("flat two-interface profile carries an exponentially small lambda") {
    const GridSpec g = GridSpec::make(1, 512);
    const double eps = 8.0 * g.h;
    const auto phi = make_initial(ShapeSpec{Ball{{0.5, 0.0, 0.0}, 0.2}}, eps, g, 8.0);
    const auto lam = lambda_golovaty(phi, eps, Discretization::spectral);
    CHECK(std::abs(lam.form_a) <= 1e-6 / eps);
}

TEST_CASE("form A equals form B to 1e-10 relative on random smooth fields (spectral)") {
    const GridSpec g = GridSpec::make(2, 64);
    const double eps = 0.05;
    for (int trial = 0; trial < 100; ++trial) {
        const auto phi = random_smooth_field(g, 8, 0.9, 3000 + trial);
        const auto lam = lambda_golovaty(phi, eps, Discretization::spectral);
        CHECK(std::abs(lam.form_a - lam.form_b) <= 1e-10 * std::abs(lam.form_a));
    }
}

TEST_CASE("form A / form B agreement improves at second order under central differences") {
    // fixed smooth profile, refined grid; kinked profiles would add an O(h)
    // cut-locus term and mask the O(h^2) chain-rule/SBP defect
    auto disagreement = [](int n) {
        const GridSpec g = GridSpec::make(1, n);
        const double eps = 0.1;
        const auto phi = sample_field(g, [&](const double* x) {
            const double t = 2.0 * std::numbers::pi * x[0];
            return 0.5 * std::sin(t) + 0.3 * std::cos(2.0 * t + 0.7) + 0.1 * std::sin(3.0 * t + 1.3);
        });
        const auto lam = lambda_golovaty(phi, eps, Discretization::central2);
        return std::abs(lam.form_a - lam.form_b);
    };
    const double e1 = disagreement(128);
    const double e2 = disagreement(256);
    const double e3 = disagreement(512);
    CHECK(e2 < 0.3 * e1);
    CHECK(e3 < 0.3 * e2);
}

#include <catch2/catch_amalgamated.hpp>

#include "vpmcf/operators.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace vpmcf;
using vpmcf::testing::random_smooth_field;
using vpmcf::testing::sample_field;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("grid construction enforces invariants") {
    CHECK_THROWS_AS(GridSpec::make(0, 16), ValidationError);
    CHECK_THROWS_AS(GridSpec::make(4, 16), ValidationError);
    CHECK_THROWS_AS(GridSpec::make(2, 4), ValidationError);
    CHECK_THROWS_AS(GridSpec::make(2, 48, Discretization::spectral), ValidationError);
    CHECK_NOTHROW(GridSpec::make(2, 48, Discretization::central2));
    const GridSpec g = GridSpec::make(2, 64);
    CHECK(g.h * g.n == 1.0);
    CHECK(g.node_count() == 4096);
}

TEST_CASE("integrate: constants, exact modes, and sin^2") {
    for (int d = 1; d <= 3; ++d) {
        const GridSpec g = GridSpec::make(d, d == 3 ? 16 : 64);
        ScalarField ones(g, 1.0);
        CHECK(integrate(ones) == Catch::Approx(1.0).margin(1e-15));
    }
    const GridSpec g = GridSpec::make(1, 64);
    const auto f = sample_field(g, [](const double* x) { return std::sin(kTwoPi * x[0]); });
    CHECK(std::abs(integrate(f)) < 1e-15);
    const auto f2 = sample_field(g, [](const double* x) {
        const double s = std::sin(kTwoPi * x[0]);
        return s * s;
    });
    CHECK(integrate(f2) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("integrate rejects non-finite input") {
    const GridSpec g = GridSpec::make(1, 8);
    ScalarField f(g, 1.0);
    f[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(integrate(f), ValidationError);
}

TEST_CASE("integrate is linear and deterministic") {
    const GridSpec g = GridSpec::make(2, 32);
    const auto u = random_smooth_field(g, 5, 1.0, 11);
    const auto v = random_smooth_field(g, 5, 1.0, 22);
    ScalarField w(g);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.5 * u[i] - 0.75 * v[i];
    CHECK(integrate(w) ==
          Catch::Approx(2.5 * integrate(u) - 0.75 * integrate(v)).margin(1e-14));
    CHECK(integrate(u) == integrate(u)); // bit-identical on repeat
}

TEST_CASE("gradient symbols match the discrete calculus") {
    const GridSpec g = GridSpec::make(1, 64);
    const auto f = sample_field(g, [](const double* x) { return std::sin(kTwoPi * x[0]); });

    SECTION("constant field has zero gradient") {
        ScalarField c(g, 0.37);
        for (auto disc : {Discretization::central2, Discretization::spectral}) {
            const auto grad = gradient(c, disc);
            for (double v : grad.comp[0]) CHECK(std::abs(v) < 1e-13);
        }
    }
    SECTION("spectral is exact on a resolved mode") {
        const auto grad = spectral_gradient(f);
        int c[1];
        for (std::size_t i = 0; i < f.size(); ++i) {
            decompose(g, i, c);
            const double want = kTwoPi * std::cos(kTwoPi * node_coord(g, c[0]));
            CHECK(grad.comp[0][i] == Catch::Approx(want).margin(1e-10));
        }
    }
    SECTION("central-2nd carries the discrete symbol sin(2 pi h)/h") {
        const auto grad = fd_gradient(f);
        const double symbol = std::sin(kTwoPi * g.h) / g.h;
        int c[1];
        for (std::size_t i = 0; i < f.size(); ++i) {
            decompose(g, i, c);
            const double want = symbol * std::cos(kTwoPi * node_coord(g, c[0]));
            CHECK(grad.comp[0][i] == Catch::Approx(want).margin(1e-12));
        }
    }
}

TEST_CASE("laplacian symbols match the discrete calculus") {
    const GridSpec g = GridSpec::make(1, 64);
    const auto f = sample_field(g, [](const double* x) { return std::sin(kTwoPi * x[0]); });

    SECTION("constant field maps to zero") {
        ScalarField c(g, -0.8);
        for (auto disc : {Discretization::central2, Discretization::spectral}) {
            const auto lap = laplacian(c, disc);
            for (double v : lap.v) CHECK(std::abs(v) < 1e-12);
        }
    }
    SECTION("spectral: -4 pi^2 sin") {
        const auto lap = spectral_laplacian(f);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(lap[i] == Catch::Approx(-4.0 * std::numbers::pi * std::numbers::pi * f[i])
                                .margin(1e-9));
    }
    SECTION("central-2nd: -(2/h^2)(1 - cos(2 pi h)) sin") {
        const auto lap = fd_laplacian(f);
        const double symbol = -(2.0 / (g.h * g.h)) * (1.0 - std::cos(kTwoPi * g.h));
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(lap[i] == Catch::Approx(symbol * f[i]).margin(1e-9));
    }
}

TEST_CASE("spectral operators are exact on trigonometric polynomials below Nyquist") {
    const GridSpec g = GridSpec::make(2, 32);
    const int k0 = 5, k1 = 7;
    const auto f = sample_field(g, [&](const double* x) {
        return std::sin(kTwoPi * k0 * x[0]) * std::cos(kTwoPi * k1 * x[1]);
    });
    const auto lap = spectral_laplacian(f);
    const double want = -kTwoPi * kTwoPi * (k0 * k0 + k1 * k1);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(lap[i] == Catch::Approx(want * f[i]).margin(1e-8));
}

TEST_CASE("summation by parts holds to round-off for the spectral pair") {
    for (int d = 1; d <= 3; ++d) {
        const GridSpec g = GridSpec::make(d, d == 3 ? 16 : 64);
        const int kmax = d == 3 ? 4 : 8;
        const int trials = d == 2 ? 40 : 30;
        for (int trial = 0; trial < trials; ++trial) {
            const auto u = random_smooth_field(g, kmax, 1.0, 1000u * d + trial);
            const auto v = random_smooth_field(g, kmax, 1.0, 2000u * d + trial);
            const auto lap_v = laplacian(v, Discretization::spectral);
            const auto gu = gradient(u, Discretization::spectral);
            const auto gv = gradient(v, Discretization::spectral);
            const double lhs = integrate_product(u, lap_v);
            const double rhs = integrate_grad_dot(gu, gv);
            const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            CHECK(std::abs(lhs + rhs) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("central-2nd pair: adjointness identities and SBP defect decay") {
    // The pinned central gradient (symbol i sin(2 pi k h)/h) and the pinned
    // (2d+1)-point Laplacian (symbol -(4/h^2) sin^2(pi k h)) are not an exact
    // adjoint pair: their SBP defect is O(h^2) on smooth fields, not round-off.
    // What does hold exactly: Laplacian self-adjointness and a vanishing mean.
    const GridSpec g = GridSpec::make(2, 32);
    const auto u = random_smooth_field(g, 4, 1.0, 7);
    const auto v = random_smooth_field(g, 4, 1.0, 8);
    const auto lap_u = fd_laplacian(u);
    const auto lap_v = fd_laplacian(v);
    CHECK(std::abs(integrate_product(u, lap_v) - integrate_product(v, lap_u)) < 1e-12);
    CHECK(std::abs(integrate(lap_v)) < 1e-11);

    auto sbp_defect = [](int n) {
        const GridSpec gg = GridSpec::make(1, n);
        const auto a = sample_field(gg, [](const double* x) { return std::sin(kTwoPi * 3 * x[0]); });
        const double lhs = integrate_product(a, fd_laplacian(a));
        const double rhs = integrate_grad_dot(fd_gradient(a), fd_gradient(a));
        return std::abs(lhs + rhs);
    };
    const double d64 = sbp_defect(64), d128 = sbp_defect(128), d256 = sbp_defect(256);
    CHECK(d128 < 0.3 * d64);
    CHECK(d256 < 0.3 * d128); // second-order decay
}

TEST_CASE("translation equivariance: shifted input gives shifted output") {
    const GridSpec g = GridSpec::make(2, 32);
    const auto f = random_smooth_field(g, 6, 1.0, 99);
    ScalarField shifted(g);
    const std::size_t sn = static_cast<std::size_t>(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            shifted[static_cast<std::size_t>((i + 1) % g.n) * sn + static_cast<std::size_t>(j)] =
                f[static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(j)];

    for (auto disc : {Discretization::central2, Discretization::spectral}) {
        const auto lap = laplacian(f, disc);
        const auto lap_shifted = laplacian(shifted, disc);
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                worst = std::max(worst,
                                 std::abs(lap_shifted[static_cast<std::size_t>((i + 1) % g.n) * sn +
                                                      static_cast<std::size_t>(j)] -
                                          lap[static_cast<std::size_t>(i) * sn +
                                              static_cast<std::size_t>(j)]));
        // FD wraps are index arithmetic (exact); the FFT path is translation
        // equivariant up to round-off.
        CHECK(worst < (disc == Discretization::central2 ? 1e-15 : 1e-11));
    }
}

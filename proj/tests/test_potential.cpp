#include <catch2/catch_amalgamated.hpp>

#include "vpmcf/potential.hpp"

#include <cmath>

using namespace vpmcf;

TEST_CASE("double-well values") {
    CHECK(eval_W(0.0) == 0.5);
    CHECK(eval_W(1.0) == 0.0);
    CHECK(eval_W(-1.0) == 0.0);
    CHECK(eval_sqrt2W(1.0) == 0.0);
    CHECK(eval_sqrt2W(-1.0) == 0.0);
    CHECK(eval_dW(1.0) == 0.0);
    CHECK(eval_dW(-1.0) == 0.0);
    CHECK(eval_dW(0.5) == Catch::Approx(-0.75).margin(1e-16));
}

TEST_CASE("dW matches a centered finite difference of W") {
    for (double s : {-1.7, -0.9, -0.3, 0.0, 0.4, 0.8, 1.0, 1.3}) {
        const double delta = 1e-6;
        const double fd = (eval_W(s + delta) - eval_W(s - delta)) / (2.0 * delta);
        CHECK(eval_dW(s) == Catch::Approx(fd).margin(1e-8));
    }
}

TEST_CASE("W is nonnegative with zeros exactly at the wells") {
    for (int i = 0; i <= 4000; ++i) {
        const double s = -2.0 + 4.0 * i / 4000.0;
        const double w = eval_W(s);
        CHECK(w >= 0.0);
        if (std::abs(std::abs(s) - 1.0) > 1e-3) CHECK(w > 0.0);
    }
    CHECK(eval_W(1.0) == 0.0);
    CHECK(eval_W(-1.0) == 0.0);
}

TEST_CASE("k values and clamping") {
    potential_reset_clamp_count();
    CHECK(eval_k(0.0) == 0.0);
    CHECK(eval_k(1.0) == Catch::Approx(2.0 / 3.0).margin(1e-16));
    CHECK(eval_k(-1.0) == Catch::Approx(-2.0 / 3.0).margin(1e-16));
    CHECK(eval_k(0.5) == Catch::Approx(11.0 / 24.0).margin(1e-16));
    CHECK(potential_clamp_count() == 0);
    CHECK(eval_k(1.5) == Catch::Approx(2.0 / 3.0).margin(1e-16));
    CHECK(eval_k(-1.0000001) == Catch::Approx(-2.0 / 3.0).margin(1e-16));
    CHECK(potential_clamp_count() == 2);
    potential_reset_clamp_count();
}

TEST_CASE("k(1/2) agrees with quadrature of sqrt(2W) over [0, 1/2]") {
    const std::size_t panels = 200000;
    const double w = 0.5 / static_cast<double>(panels);
    double acc = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double s = (static_cast<double>(i) + 0.5) * w;
        acc += eval_sqrt2W(s);
    }
    acc *= w;
    CHECK(acc == Catch::Approx(eval_k(0.5)).margin(1e-12));
}

TEST_CASE("k' = sqrt(2W): finite differences refine at second order") {
    auto fd_err = [](double delta) {
        double worst = 0.0;
        for (double s : {-0.9, -0.5, 0.0, 0.3, 0.7}) {
            const double fd = (eval_k(s + delta) - eval_k(s - delta)) / (2.0 * delta);
            worst = std::max(worst, std::abs(fd - eval_sqrt2W(s)));
        }
        return worst;
    };
    const double e1 = fd_err(1e-3);
    const double e2 = fd_err(5e-4);
    CHECK(e2 < 0.3 * e1); // O(delta^2)
}

TEST_CASE("sigma closed form, quadrature cross-check, and k(1)-k(-1)") {
    CHECK(sigma() == Catch::Approx(4.0 / 3.0).margin(1e-16));
    CHECK(std::abs(sigma_quadrature(1000000) - 4.0 / 3.0) <= 1e-10);
    CHECK(eval_k(1.0) - eval_k(-1.0) == Catch::Approx(sigma()).margin(1e-15));
}

TEST_CASE("profile q: limits, monotonicity, inversion, scaling") {
    CHECK(profile_q(0.0, 0.07) == 0.0);
    CHECK(profile_q(1e3, 0.1) == Catch::Approx(1.0).margin(1e-15));
    CHECK(profile_q(-1e3, 0.1) == Catch::Approx(-1.0).margin(1e-15));
    CHECK_THROWS_AS(profile_q(0.1, 0.0), ValidationError);
    CHECK_THROWS_AS(profile_q(0.1, -1.0), ValidationError);

    const double eps = 0.05;
    CHECK(profile_q(eps * std::atanh(0.9), eps) == Catch::Approx(0.9).margin(1e-13));
    for (double r : {-0.3, -0.01, 0.02, 0.6})
        CHECK(profile_q(r, eps) == Catch::Approx(profile_q(r / eps, 1.0)).margin(1e-15));

    // strictly increasing wherever tanh is not saturated to 1 ulp
    double prev = -2.0;
    for (int i = -100; i <= 100; ++i) {
        const double q = profile_q(0.005 * i, eps);
        CHECK(q > prev);
        prev = q;
    }
}

TEST_CASE("profile q satisfies both profile identities to 1e-10") {
    const double eps = 0.03;
    for (int i = 0; i < 1000; ++i) {
        const double r = -0.5 + 1.0 * i / 999.0;
        const double q = profile_q(r, eps);
        const double qr = (1.0 - q * q) / eps; // exact derivative of tanh(r/eps)
        const double lhs1 = 0.5 * eps * qr * qr;
        const double rhs1 = eval_W(q) / eps;
        CHECK(std::abs(lhs1 - rhs1) <= 1e-12 * (std::abs(rhs1) + 1.0)); // equipartition
        const double qrr = -2.0 * q * (1.0 - q * q) / (eps * eps);
        const double rhs2 = eval_dW(q) / (eps * eps);
        CHECK(std::abs(qrr - rhs2) <= 1e-10 * (std::abs(rhs2) + 1.0));
    }
}

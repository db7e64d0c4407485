#include "vpmcf/multiplier.hpp"

#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"

namespace vpmcf {

double lambda_golovaty_form_a(const ScalarField& phi, const ScalarField& lap, double eps) {
    const double denom = integrate_nodal(phi.grid, [&](std::size_t i) { return eval_W(phi[i]); });
    if (denom <= kDenominatorGuard)
        throw NumericalError("lambda_golovaty: degenerate state, integral W(phi) below guard");
    const double num_a = -integrate_nodal(phi.grid, [&](std::size_t i) {
        return eval_sqrt2W(phi[i]) * (eps * lap[i] - eval_dW(phi[i]) / eps);
    });
    return num_a / (2.0 * denom);
}

GolovatyLambda lambda_golovaty(const ScalarField& phi, double eps, Discretization disc) {
    require_finite(phi, "lambda_golovaty");
    const double denom = integrate_nodal(phi.grid, [&](std::size_t i) { return eval_W(phi[i]); });
    if (denom <= kDenominatorGuard)
        throw NumericalError("lambda_golovaty: degenerate state, integral W(phi) below guard");

    const ScalarField lap = laplacian(phi, disc);
    const double num_a = -integrate_nodal(phi.grid, [&](std::size_t i) {
        return eval_sqrt2W(phi[i]) * (eps * lap[i] - eval_dW(phi[i]) / eps);
    });

    const VectorField grad = gradient(phi, disc);
    const int d = phi.grid.d;
    const double num_b = -2.0 * integrate_nodal(phi.grid, [&](std::size_t i) {
        double g2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double c = grad.comp[static_cast<std::size_t>(a)][i];
            g2 += c * c;
        }
        return phi[i] * (0.5 * eps * g2 + eval_W(phi[i]) / eps);
    });

    return GolovatyLambda{num_a / (2.0 * denom), num_b / denom};
}

double lambda_rs(const ScalarField& phi, double eps) {
    require_finite(phi, "lambda_rs");
    return integrate_nodal(phi.grid, [&](std::size_t i) { return eval_dW(phi[i]); }) / eps;
}

double lambda_bb(const ScalarField& phi, double eps) {
    require_finite(phi, "lambda_bb");
    const double denom = integrate_nodal(phi.grid, [&](std::size_t i) { return eval_sqrt2W(phi[i]); });
    if (denom <= kDenominatorGuard)
        throw NumericalError("lambda_bb: degenerate state, integral sqrt(2W) below guard");
    const double num = integrate_nodal(phi.grid, [&](std::size_t i) { return eval_dW(phi[i]); }) / eps;
    return num / denom;
}

double analytic_multiplier(EquationVariant variant, const ScalarField& phi, double eps,
                           Discretization disc) {
    switch (variant) {
        case EquationVariant::golovaty: return lambda_golovaty(phi, eps, disc).form_a;
        case EquationVariant::rubinstein_sternberg: return lambda_rs(phi, eps);
        case EquationVariant::brassel_bretin: return lambda_bb(phi, eps);
        case EquationVariant::plain_allen_cahn: return 0.0;
    }
    return 0.0;
}

} // namespace vpmcf

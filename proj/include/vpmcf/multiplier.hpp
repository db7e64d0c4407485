#pragma once

#include "vpmcf/field.hpp"

namespace vpmcf {

enum class EquationVariant {
    golovaty,             ///< lambda * sqrt(2W) forcing, conserves integral k(phi)
    rubinstein_sternberg, ///< constant forcing lambda_1, conserves integral phi
    brassel_bretin,       ///< lambda_2 * sqrt(2W) forcing, conserves integral phi
    plain_allen_cahn      ///< no multiplier
};

struct GolovatyLambda {
    double form_a = 0.0; ///< -integral sqrt(2W)(eps Lap phi - W'/eps) / (2 integral W)
    double form_b = 0.0; ///< -2 integral phi (eps|grad phi|^2/2 + W/eps) / integral W
};

inline constexpr double kDenominatorGuard = 1e-14;

/// Both algebraic forms of the Golovaty multiplier. Form A drives dynamics;
/// form B is the verification channel. Throws NumericalError when
/// integral W(phi) falls below the guard (phi ~ +-1 everywhere).
GolovatyLambda lambda_golovaty(const ScalarField& phi, double eps, Discretization disc);

/// Form A from a precomputed Laplacian (the stepper reuses its own).
double lambda_golovaty_form_a(const ScalarField& phi, const ScalarField& lap, double eps);

/// lambda_1 = mean of W'(phi)/eps (torus has unit volume).
double lambda_rs(const ScalarField& phi, double eps);

/// lambda_2 = integral(W'(phi)/eps) / integral(sqrt(2W(phi))); guards the denominator.
double lambda_bb(const ScalarField& phi, double eps);

/// Dynamical multiplier for a variant (form A for golovaty, 0 for plain AC).
double analytic_multiplier(EquationVariant variant, const ScalarField& phi, double eps,
                           Discretization disc);

} // namespace vpmcf

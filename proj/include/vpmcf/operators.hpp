#pragma once

#include "vpmcf/fft.hpp"
#include "vpmcf/field.hpp"
#include "vpmcf/reduce.hpp"

namespace vpmcf {

/// h^d * sum of nodal values via the deterministic pairwise reduction.
/// Rejects fields with non-finite content.
double integrate(const ScalarField& f);

/// h^d * sum of u_i * v_i (same tree as integrate).
double integrate_product(const ScalarField& u, const ScalarField& v);

/// h^d * sum of f(i) over nodes; f must be pure.
template <class F>
double integrate_nodal(const GridSpec& g, F&& f) {
    const double hpow = std::pow(g.h, g.d);
    return hpow * pairwise_map_sum(std::size_t{0}, g.node_count(), f);
}

/// h^d * sum over nodes of grad(u) . grad(v).
double integrate_grad_dot(const VectorField& u, const VectorField& v);

VectorField gradient(const ScalarField& f, Discretization disc);
ScalarField laplacian(const ScalarField& f, Discretization disc);

VectorField fd_gradient(const ScalarField& f);
ScalarField fd_laplacian(const ScalarField& f);

double max_abs(const ScalarField& f);

} // namespace vpmcf

#include "vpmcf/operators.hpp"

#include <cmath>

namespace vpmcf {

namespace {

std::vector<int> wrap_next(int n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (i + 1 == n) ? 0 : i + 1;
    return w;
}

std::vector<int> wrap_prev(int n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (i == 0) ? n - 1 : i - 1;
    return w;
}

} // namespace

double integrate(const ScalarField& f) {
    const double hpow = std::pow(f.grid.h, f.grid.d);
    const double s = hpow * pairwise_sum(f.v.data(), f.v.size());
    if (!std::isfinite(s)) throw ValidationError("integrate: field has non-finite content");
    return s;
}

double integrate_product(const ScalarField& u, const ScalarField& v) {
    if (u.grid != v.grid) throw ValidationError("integrate_product: grid mismatch");
    const double hpow = std::pow(u.grid.h, u.grid.d);
    const double* a = u.v.data();
    const double* b = v.v.data();
    const double s =
        hpow * pairwise_map_sum(std::size_t{0}, u.size(), [a, b](std::size_t i) { return a[i] * b[i]; });
    if (!std::isfinite(s)) throw ValidationError("integrate_product: non-finite content");
    return s;
}

double integrate_grad_dot(const VectorField& u, const VectorField& v) {
    if (u.grid != v.grid) throw ValidationError("integrate_grad_dot: grid mismatch");
    const GridSpec& g = u.grid;
    const double hpow = std::pow(g.h, g.d);
    double s = hpow * pairwise_map_sum(std::size_t{0}, g.node_count(), [&](std::size_t i) {
        double acc = 0.0;
        for (int a = 0; a < g.d; ++a)
            acc += u.comp[static_cast<std::size_t>(a)][i] * v.comp[static_cast<std::size_t>(a)][i];
        return acc;
    });
    if (!std::isfinite(s)) throw ValidationError("integrate_grad_dot: non-finite content");
    return s;
}

VectorField fd_gradient(const ScalarField& f) {
    const GridSpec& g = f.grid;
    const int n = g.n;
    const double inv2h = 1.0 / (2.0 * g.h);
    const auto nx = wrap_next(n);
    const auto pv = wrap_prev(n);
    VectorField out(g);
    const double* x = f.v.data();

    if (g.d == 1) {
        double* g0 = out.comp[0].data();
        for (int i = 0; i < n; ++i)
            g0[i] = (x[nx[static_cast<std::size_t>(i)]] - x[pv[static_cast<std::size_t>(i)]]) * inv2h;
        return out;
    }
    if (g.d == 2) {
        double* g0 = out.comp[0].data();
        double* g1 = out.comp[1].data();
        for (int i = 0; i < n; ++i) {
            const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
            const std::size_t rown = static_cast<std::size_t>(nx[static_cast<std::size_t>(i)]) * static_cast<std::size_t>(n);
            const std::size_t rowp = static_cast<std::size_t>(pv[static_cast<std::size_t>(i)]) * static_cast<std::size_t>(n);
            for (int j = 0; j < n; ++j) {
                const std::size_t idx = row + static_cast<std::size_t>(j);
                g0[idx] = (x[rown + static_cast<std::size_t>(j)] - x[rowp + static_cast<std::size_t>(j)]) * inv2h;
                g1[idx] = (x[row + static_cast<std::size_t>(nx[static_cast<std::size_t>(j)])] -
                           x[row + static_cast<std::size_t>(pv[static_cast<std::size_t>(j)])]) * inv2h;
            }
        }
        return out;
    }
    double* g0 = out.comp[0].data();
    double* g1 = out.comp[1].data();
    double* g2 = out.comp[2].data();
    const std::size_t sn = static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t base = (static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(j)) * sn;
            const std::size_t ibase_n = (static_cast<std::size_t>(nx[static_cast<std::size_t>(i)]) * sn + static_cast<std::size_t>(j)) * sn;
            const std::size_t ibase_p = (static_cast<std::size_t>(pv[static_cast<std::size_t>(i)]) * sn + static_cast<std::size_t>(j)) * sn;
            const std::size_t jbase_n = (static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(nx[static_cast<std::size_t>(j)])) * sn;
            const std::size_t jbase_p = (static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(pv[static_cast<std::size_t>(j)])) * sn;
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = base + static_cast<std::size_t>(k);
                g0[idx] = (x[ibase_n + static_cast<std::size_t>(k)] - x[ibase_p + static_cast<std::size_t>(k)]) * inv2h;
                g1[idx] = (x[jbase_n + static_cast<std::size_t>(k)] - x[jbase_p + static_cast<std::size_t>(k)]) * inv2h;
                g2[idx] = (x[base + static_cast<std::size_t>(nx[static_cast<std::size_t>(k)])] -
                           x[base + static_cast<std::size_t>(pv[static_cast<std::size_t>(k)])]) * inv2h;
            }
        }
    return out;
}

ScalarField fd_laplacian(const ScalarField& f) {
    const GridSpec& g = f.grid;
    const int n = g.n;
    const double invh2 = 1.0 / (g.h * g.h);
    const auto nx = wrap_next(n);
    const auto pv = wrap_prev(n);
    ScalarField out(g);
    const double* x = f.v.data();
    double* y = out.v.data();

    if (g.d == 1) {
        for (int i = 0; i < n; ++i)
            y[i] = (x[nx[static_cast<std::size_t>(i)]] - 2.0 * x[i] + x[pv[static_cast<std::size_t>(i)]]) * invh2;
        return out;
    }
    if (g.d == 2) {
        const std::size_t sn = static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i) {
            const std::size_t row = static_cast<std::size_t>(i) * sn;
            const std::size_t rown = static_cast<std::size_t>(nx[static_cast<std::size_t>(i)]) * sn;
            const std::size_t rowp = static_cast<std::size_t>(pv[static_cast<std::size_t>(i)]) * sn;
            for (int j = 0; j < n; ++j) {
                const std::size_t idx = row + static_cast<std::size_t>(j);
                const double c = x[idx];
                y[idx] = (x[rown + static_cast<std::size_t>(j)] + x[rowp + static_cast<std::size_t>(j)] +
                          x[row + static_cast<std::size_t>(nx[static_cast<std::size_t>(j)])] +
                          x[row + static_cast<std::size_t>(pv[static_cast<std::size_t>(j)])] - 4.0 * c) * invh2;
            }
        }
        return out;
    }
    const std::size_t sn = static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t base = (static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(j)) * sn;
            const std::size_t ibase_n = (static_cast<std::size_t>(nx[static_cast<std::size_t>(i)]) * sn + static_cast<std::size_t>(j)) * sn;
            const std::size_t ibase_p = (static_cast<std::size_t>(pv[static_cast<std::size_t>(i)]) * sn + static_cast<std::size_t>(j)) * sn;
            const std::size_t jbase_n = (static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(nx[static_cast<std::size_t>(j)])) * sn;
            const std::size_t jbase_p = (static_cast<std::size_t>(i) * sn + static_cast<std::size_t>(pv[static_cast<std::size_t>(j)])) * sn;
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = base + static_cast<std::size_t>(k);
                y[idx] = (x[ibase_n + static_cast<std::size_t>(k)] + x[ibase_p + static_cast<std::size_t>(k)] +
                          x[jbase_n + static_cast<std::size_t>(k)] + x[jbase_p + static_cast<std::size_t>(k)] +
                          x[base + static_cast<std::size_t>(nx[static_cast<std::size_t>(k)])] +
                          x[base + static_cast<std::size_t>(pv[static_cast<std::size_t>(k)])] - 6.0 * x[idx]) * invh2;
            }
        }
    return out;
}

VectorField gradient(const ScalarField& f, Discretization disc) {
    require_finite(f, "gradient");
    return disc == Discretization::spectral ? spectral_gradient(f) : fd_gradient(f);
}

ScalarField laplacian(const ScalarField& f, Discretization disc) {
    require_finite(f, "laplacian");
    return disc == Discretization::spectral ? spectral_laplacian(f) : fd_laplacian(f);
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace vpmcf

#pragma once

#include "vpmcf/error.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace vpmcf {

/// Spatial discretization flavor used by the differential operators.
enum class Discretization {
    central2, ///< 2nd-order central differences, (2d+1)-point Laplacian
    spectral  ///< Fourier multipliers, power-of-two grids only
};

inline bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Uniform node-centered grid on the unit torus [0,1)^d, nodes at x_i = i*h.
struct GridSpec {
    int d = 0;        ///< spatial dimension, 1..3
    int n = 0;        ///< nodes per axis
    double h = 0.0;   ///< spacing, exactly 1/n

    static GridSpec make(int d, int n) {
        if (d < 1 || d > 3) throw ValidationError("GridSpec: dimension must be 1, 2 or 3");
        if (n < 8) throw ValidationError("GridSpec: need at least 8 nodes per axis");
        return GridSpec{d, n, 1.0 / static_cast<double>(n)};
    }

    static GridSpec make(int d, int n, Discretization disc) {
        if (disc == Discretization::spectral && !is_pow2(static_cast<std::uint64_t>(n)))
            throw ValidationError("GridSpec: spectral mode requires a power-of-two grid");
        return make(d, n);
    }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (int a = 0; a < d; ++a) c *= static_cast<std::size_t>(n);
        return c;
    }

    /// Row-major strides, last axis fastest.
    std::array<std::size_t, 3> strides() const {
        std::array<std::size_t, 3> s{0, 0, 0};
        std::size_t acc = 1;
        for (int a = d - 1; a >= 0; --a) {
            s[static_cast<std::size_t>(a)] = acc;
            acc *= static_cast<std::size_t>(n);
        }
        return s;
    }

    bool operator==(const GridSpec& o) const { return d == o.d && n == o.n; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Nodal scalar field over a GridSpec, values in row-major order.
struct ScalarField {
    GridSpec grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), v(g.node_count(), fill) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
};

/// d component fields sharing one grid.
struct VectorField {
    GridSpec grid;
    std::array<std::vector<double>, 3> comp;

    VectorField() = default;
    explicit VectorField(const GridSpec& g) : grid(g) {
        for (int a = 0; a < g.d; ++a) comp[static_cast<std::size_t>(a)].assign(g.node_count(), 0.0);
    }
};

/// Node coordinate along one axis.
inline double node_coord(const GridSpec& g, int i) { return g.h * static_cast<double>(i); }

/// Decompose a linear row-major index into per-axis coordinates.
inline void decompose(const GridSpec& g, std::size_t idx, int* c) {
    for (int a = g.d - 1; a >= 0; --a) {
        c[a] = static_cast<int>(idx % static_cast<std::size_t>(g.n));
        idx /= static_cast<std::size_t>(g.n);
    }
}

/// Shortest signed displacement a-b on the unit circle.
inline double min_image(double delta) {
    delta -= std::floor(delta + 0.5);
    return delta;
}

/// Squared minimum-image distance between torus points.
inline double torus_dist2(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        double t = min_image(a[i] - b[i]);
        s += t * t;
    }
    return s;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline void require_finite(const ScalarField& f, const char* who) {
    if (!all_finite(f.v)) throw ValidationError(std::string(who) + ": field has non-finite entries");
}

} // namespace vpmcf

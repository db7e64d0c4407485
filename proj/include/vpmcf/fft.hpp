#pragma once

#include "vpmcf/field.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace vpmcf {

/// Real-to-complex FFT machinery for one grid, with cached FFTW plans.
///
/// Wavenumber convention: integer k in (-n/2, n/2] per axis. The derivative
/// multipliers zero the Nyquist mode (k = n/2) on every axis, which makes the
/// (gradient, laplacian) pair exactly adjoint under the nodal quadrature; the
/// unfiltered |k|^2 is kept separately for the semi-implicit solver where full
/// damping of the top mode is wanted.
class Spectral {
public:
    /// Cached instance per (d, n). Throws ValidationError for non-power-of-two n.
    static const Spectral& get(const GridSpec& grid);

    std::size_t complex_count() const { return complex_count_; }
    const GridSpec& grid() const { return grid_; }

    /// Unnormalized forward transform.
    void forward(const double* in, std::complex<double>* out) const;
    /// Normalized inverse transform (result divided by n^d). Clobbers `in`.
    void inverse(std::complex<double>* in, double* out) const;

    /// 2*pi*k for axis `a` and per-axis index i, with the Nyquist mode zeroed.
    double wave(int a, int i) const { return wave_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]; }
    /// (2*pi*k)^2 for axis `a`, true value at Nyquist.
    double wave2_full(int a, int i) const { return wave2_full_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]; }

    /// Loop over all retained complex modes; f(flat, i0, i1, i2) with unused
    /// axes pinned at 0. Flat order matches forward()'s output layout.
    template <class F>
    void for_each_mode(F&& f) const {
        const int n = grid_.n;
        const int nh = n / 2 + 1;
        std::size_t flat = 0;
        if (grid_.d == 1) {
            for (int i0 = 0; i0 < nh; ++i0) f(flat++, i0, 0, 0);
        } else if (grid_.d == 2) {
            for (int i0 = 0; i0 < n; ++i0)
                for (int i1 = 0; i1 < nh; ++i1) f(flat++, i0, i1, 0);
        } else {
            for (int i0 = 0; i0 < n; ++i0)
                for (int i1 = 0; i1 < n; ++i1)
                    for (int i2 = 0; i2 < nh; ++i2) f(flat++, i0, i1, i2);
        }
    }

    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;
    ~Spectral();

private:
    explicit Spectral(const GridSpec& grid);

    GridSpec grid_;
    std::size_t complex_count_ = 0;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
    std::array<std::vector<double>, 3> wave_;       // 2*pi*k, Nyquist zeroed
    std::array<std::vector<double>, 3> wave2_full_; // (2*pi*k)^2, true Nyquist
};

ScalarField spectral_laplacian(const ScalarField& f);
VectorField spectral_gradient(const ScalarField& f);

} // namespace vpmcf

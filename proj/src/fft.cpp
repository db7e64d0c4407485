#include "vpmcf/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace vpmcf {

namespace {

int signed_wavenumber(int i, int n) { return (i <= n / 2) ? i : i - n; }

} // namespace

Spectral::Spectral(const GridSpec& grid) : grid_(grid) {
    if (!is_pow2(static_cast<std::uint64_t>(grid.n)))
        throw ValidationError("Spectral: power-of-two grid required");
    const int n = grid.n;
    const int nh = n / 2 + 1;
    complex_count_ = static_cast<std::size_t>(nh);
    for (int a = 0; a < grid.d - 1; ++a) complex_count_ *= static_cast<std::size_t>(n);

    const double two_pi = 2.0 * std::numbers::pi;
    for (int a = 0; a < grid.d; ++a) {
        auto& w = wave_[static_cast<std::size_t>(a)];
        auto& w2 = wave2_full_[static_cast<std::size_t>(a)];
        w.resize(static_cast<std::size_t>(n));
        w2.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int k = signed_wavenumber(i, n);
            const double wk = two_pi * static_cast<double>(k);
            w[static_cast<std::size_t>(i)] = (k == n / 2) ? 0.0 : wk;
            w2[static_cast<std::size_t>(i)] = wk * wk;
        }
    }

    int dims[3] = {n, n, n};
    std::vector<double> rbuf(grid.node_count());
    std::vector<std::complex<double>> cbuf(complex_count_);
    plan_fwd_ = fftw_plan_dft_r2c(grid.d, dims, rbuf.data(),
                                  reinterpret_cast<fftw_complex*>(cbuf.data()),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_inv_ = fftw_plan_dft_c2r(grid.d, dims, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                  rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_inv_) throw NumericalError("Spectral: FFTW plan creation failed");
}

Spectral::~Spectral() {
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

const Spectral& Spectral::get(const GridSpec& grid) {
    static std::map<std::pair<int, int>, std::unique_ptr<Spectral>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(grid.d, grid.n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::unique_ptr<Spectral>(new Spectral(grid))).first;
    return *it->second;
}

void Spectral::forward(const double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
}

void Spectral::inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                         reinterpret_cast<fftw_complex*>(in), out);
    const double scale = 1.0 / static_cast<double>(grid_.node_count());
    const std::size_t count = grid_.node_count();
    for (std::size_t i = 0; i < count; ++i) out[i] *= scale;
}

ScalarField spectral_laplacian(const ScalarField& f) {
    const Spectral& sp = Spectral::get(f.grid);
    std::vector<std::complex<double>> spec(sp.complex_count());
    sp.forward(f.v.data(), spec.data());
    sp.for_each_mode([&](std::size_t flat, int i0, int i1, int i2) {
        const double w0 = sp.wave(0, i0);
        double m = w0 * w0;
        if (f.grid.d > 1) {
            const double w1 = sp.wave(1, i1);
            m += w1 * w1;
        }
        if (f.grid.d > 2) {
            const double w2 = sp.wave(2, i2);
            m += w2 * w2;
        }
        spec[flat] *= -m;
    });
    ScalarField out(f.grid);
    sp.inverse(spec.data(), out.v.data());
    return out;
}

VectorField spectral_gradient(const ScalarField& f) {
    const Spectral& sp = Spectral::get(f.grid);
    std::vector<std::complex<double>> spec(sp.complex_count());
    std::vector<std::complex<double>> work(sp.complex_count());
    sp.forward(f.v.data(), spec.data());
    VectorField out(f.grid);
    for (int a = 0; a < f.grid.d; ++a) {
        sp.for_each_mode([&](std::size_t flat, int i0, int i1, int i2) {
            const int ia = (a == 0) ? i0 : (a == 1) ? i1 : i2;
            const double w = sp.wave(a, ia);
            work[flat] = std::complex<double>(0.0, w) * spec[flat];
        });
        sp.inverse(work.data(), out.comp[static_cast<std::size_t>(a)].data());
    }
    return out;
}

} // namespace vpmcf

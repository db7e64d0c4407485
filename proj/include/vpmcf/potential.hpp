#pragma once

#include "vpmcf/error.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>

namespace vpmcf {

// Double-well algebra for W(s) = (1 - s^2)^2 / 2. The well is fixed: every
// derived constant below (sigma = 4/3, k(+-1) = +-2/3) is specific to it.

inline double eval_W(double s) {
    const double u = 1.0 - s * s;
    return 0.5 * u * u;
}

inline double eval_dW(double s) { return -2.0 * s * (1.0 - s * s); }

/// sqrt(2 W(s)) = |1 - s^2|; the absolute value keeps the formula total for
/// arguments pushed slightly past the wells by round-off.
inline double eval_sqrt2W(double s) { return std::abs(1.0 - s * s); }

std::uint64_t potential_clamp_count() noexcept;
void potential_reset_clamp_count() noexcept;
namespace detail {
std::atomic<std::uint64_t>& clamp_counter() noexcept;
}

/// k(s) = integral of sqrt(2W) from 0 to s = s - s^3/3. Arguments outside
/// [-1, 1] are clamped (the cubic would extrapolate nonsensically) and the
/// event is tallied for diagnostics.
inline double eval_k(double s) {
    if (s > 1.0 || s < -1.0) {
        detail::clamp_counter().fetch_add(1, std::memory_order_relaxed);
        s = (s > 1.0) ? 1.0 : -1.0;
    }
    return s - s * s * s / 3.0;
}

/// Surface tension sigma = integral of sqrt(2W) over [-1, 1], in closed form.
inline double sigma() { return 4.0 / 3.0; }

/// Composite-midpoint quadrature cross-check for sigma().
double sigma_quadrature(std::size_t panels);

/// Standing-wave profile q^eps(r) = tanh(r / eps).
inline double profile_q(double r, double eps) {
    if (!(eps > 0.0)) throw ValidationError("profile_q: eps must be positive");
    return std::tanh(r / eps);
}

} // namespace vpmcf

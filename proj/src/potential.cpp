#include "vpmcf/potential.hpp"

#include "vpmcf/reduce.hpp"

namespace vpmcf {

namespace detail {
std::atomic<std::uint64_t>& clamp_counter() noexcept {
    static std::atomic<std::uint64_t> counter{0};
    return counter;
}
} // namespace detail

std::uint64_t potential_clamp_count() noexcept {
    return detail::clamp_counter().load(std::memory_order_relaxed);
}

void potential_reset_clamp_count() noexcept {
    detail::clamp_counter().store(0, std::memory_order_relaxed);
}

double sigma_quadrature(std::size_t panels) {
    const double w = 2.0 / static_cast<double>(panels);
    return w * pairwise_map_sum(std::size_t{0}, panels, [w](std::size_t i) {
        const double s = -1.0 + (static_cast<double>(i) + 0.5) * w;
        return eval_sqrt2W(s);
    });
}

} // namespace vpmcf

#pragma once

#include <cstddef>

namespace vpmcf {

// Deterministic pairwise (tree) reduction. The tree topology depends only on
// the index range, never on threading or chunk sizes, so sums are bit-identical
// across runs and worker counts.

constexpr std::size_t kReduceLeaf = 32;

template <class F>
double pairwise_map_sum(std::size_t lo, std::size_t hi, F&& f) {
    if (hi - lo <= kReduceLeaf) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_map_sum(lo, mid, f) + pairwise_map_sum(mid, hi, f);
}

inline double pairwise_sum(const double* x, std::size_t count) {
    return pairwise_map_sum(std::size_t{0}, count, [x](std::size_t i) { return x[i]; });
}

} // namespace vpmcf

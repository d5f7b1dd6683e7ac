#pragma once

namespace osvd {

namespace detail {
inline constexpr Index kPairwiseBlock = 128;

template <typename F>
double pairwise_reduce_range(Index begin, Index end, F& term) {
    if (end - begin <= kPairwiseBlock) {
        double acc = 0.0;
        for (Index i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const Index mid = begin + (end - begin) / 2;
    return pairwise_reduce_range(begin, mid, term) + pairwise_reduce_range(mid, end, term);
}
} // namespace detail

// Sums term(0) + ... + term(n-1) with a fixed binary tree over blocks of 128.
template <typename F>
double pairwise_reduce(Index n, F&& term) {
    return detail::pairwise_reduce_range(Index{0}, n, term);
}

} // namespace osvd

#ifndef HAZECLEAR_RANDOM_HPP
#define HAZECLEAR_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace hazeclear {

// std::shuffle and the distribution classes are implementation-defined;
// these draw from the raw mt19937 stream so seeded runs are reproducible
// across standard libraries.

inline std::uint32_t draw_below(std::mt19937& rng, std::uint32_t n) {
    return rng() % n;
}

template <class T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[draw_below(rng, std::uint32_t(i))]);
}

/// k distinct indices out of [0, n), in shuffled order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k,
                                               std::mt19937& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k >= n) return idx;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + draw_below(rng, std::uint32_t(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace hazeclear

#endif

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace cmsent {

// Seeded permutations that are identical on every platform.
//
// The raw output of std::mt19937_64 is fixed by the standard, but
// std::shuffle and std::uniform_int_distribution are not, so both the
// bounded draw and the Fisher-Yates loop are written out here.
//
//   bounded draw: rejection sampling on the 64-bit output; values below
//                 (2^64 - bound) mod bound are rejected, the rest are
//                 reduced modulo bound.
//   shuffle:      for i = n-1 down to 1, swap(v[i], v[draw(i + 1)]).
class SeededShuffler {
public:
    explicit SeededShuffler(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t draw(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(draw(i));
            using std::swap;
            swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededShuffler(seed).shuffle(order);
    return order;
}

}  // namespace cmsent

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace niceaug {

// Deterministic, platform-independent RNG. std::mt19937 itself is portable but
// the std distributions are not, so all draws go through this class.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection of the biased low range.
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Counter-based seed split: children are independent of how many siblings are
// drawn, so adding plan variants never perturbs earlier plans.
inline std::uint64_t split_seed(std::uint64_t root, std::initializer_list<std::uint64_t> streams) {
    std::uint64_t h = root;
    for (std::uint64_t s : streams) {
        h ^= s + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h = SplitMix64(h).next();
    }
    return h;
}

}  // namespace niceaug

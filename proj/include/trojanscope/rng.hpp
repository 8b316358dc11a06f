#pragma once

#include <cmath>
#include <cstdint>

namespace trojanscope::rng {

// Counter-based randomness shared by the synthetic-control generator, the
// poisoning sampler and the test suite. Every draw is a pure function of
// (seed, tags...), so values are identical no matter in which order or on
// how many threads they are produced, and the construction is simple enough
// to replicate in any language.
//
// Construction, bit-exact:
//   splitmix64(x):
//     x += 0x9E3779B97F4A7C15
//     x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
//     x = (x ^ (x >> 27)) * 0x94D049BB133111EB
//     return x ^ (x >> 31)
//   word(seed, a)       = splitmix64(splitmix64(seed) ^ a)
//   word(seed, a, b)    = splitmix64(word(seed, a) ^ b)
//   word(seed, a, b, c) = splitmix64(word(seed, a, b) ^ c)
//   unit(w)             = ((w >> 11) + 0.5) * 2^-53          in (0, 1)
//   normal(u1, u2)      = sqrt(-2 ln u1) * cos(2 pi u2)       (Box-Muller)

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t a) {
    return splitmix64(splitmix64(seed) ^ a);
}

constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(word(seed, a) ^ b);
}

constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                             std::uint64_t c) {
    return splitmix64(word(seed, a, b) ^ c);
}

/// Maps a 64-bit word to the open interval (0, 1).
inline double to_unit(std::uint64_t w) {
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal deviate from two words (Box-Muller, cosine branch).
inline double to_normal(std::uint64_t w1, std::uint64_t w2) {
    const double u1 = to_unit(w1);
    const double u2 = to_unit(w2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Sequential counter stream for consumers that just need "the next word"
/// (shuffles, coin flips). Still a pure function of (seed, tag, counter).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t tag) : seed_(seed), tag_(tag) {}

    std::uint64_t next() { return word(seed_, tag_, counter_++); }

    /// Uniform integer in [0, bound) by modulo; bias is irrelevant at the
    /// sample sizes used here and the result stays reproducible everywhere.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    double next_unit() { return to_unit(next()); }

    double next_normal() {
        const std::uint64_t w1 = next();
        const std::uint64_t w2 = next();
        return to_normal(w1, w2);
    }

private:
    std::uint64_t seed_;
    std::uint64_t tag_;
    std::uint64_t counter_ = 0;
};

}  // namespace trojanscope::rng

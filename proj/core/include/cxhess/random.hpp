#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cxhess {

// SplitMix64 generator. Small state, so a fresh substream per sample index is
// cheap; results depend only on (seed, index) and never on scheduling.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second variate is discarded so the
    // stream position is a pure function of the number of calls.
    double normal() noexcept {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

// Counter-based split: the generator for sample `index` of stream `seed`.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) noexcept {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (salt + 1)));
    const std::uint64_t a = mix();
    SplitMix64 mix2(a + 0x9E3779B97F4A7C15ULL * (index + 1));
    mix2();
    return SplitMix64(mix2());
}

} // namespace cxhess

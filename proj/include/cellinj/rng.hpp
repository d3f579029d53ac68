#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace cellinj {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen over the <random> engines because
/// the std distributions are implementation-defined; this generator and the
/// helpers below yield identical streams on every platform.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform in (lo, hi].
    constexpr double uniform_upper(double lo, double hi) { return hi - (hi - lo) * unit(); }

    /// Log-uniform in [lo, hi), lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit());
    }

    constexpr std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char ch : text) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seed of the independent stream a named property draws from.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::string_view name) {
    SplitMix64 mixer(seed ^ fnv1a64(name));
    return mixer.next();
}

}  // namespace cellinj

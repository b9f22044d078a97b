#pragma once

#include <cmath>
#include <cstdint>

namespace pbs {

/// splitmix64: the standard 64-bit counter-hash generator. One stream per
/// (seed, worker) pair keeps every Monte-Carlo result independent of
/// execution order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// uniform in (0, 1]
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Sub-stream derivation: hash the worker index into the seed so streams
/// from distinct indices are statistically independent.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return SplitMix64(mixer.next_u64());
}

/// Standard normal draws, Box-Muller on splitmix64 uniforms. Pair-caching
/// keeps the draw count per stream deterministic.
class NormalSource {
public:
    explicit NormalSource(SplitMix64 gen) : gen_(gen) {}

    double next() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        const double u1 = gen_.next_double();
        const double u2 = gen_.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

private:
    SplitMix64 gen_;
    double cached_ = 0.0;
    bool have_ = false;
};

} // namespace pbs

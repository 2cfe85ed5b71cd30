#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace slf {

// Deterministic 64-bit generator used for all fixtures and phantoms.
//
// Core step is splitmix64 (Vigna): state advances by the golden-ratio gamma
// 0x9E3779B97F4A7C15 and the output is a finalizing mix of the new state.
// Every derived quantity below is defined purely in terms of next_u64(), so
// streams are reproducible across platforms and easy to port to other
// languages.
//
// Stream splitting: child(k) seeds a fresh generator from the *original* seed
// of this one (not the current state) mixed with k, so the children of a
// generator do not depend on how much the parent has been consumed. Nested
// splits compose: child(a).child(b) is a pure function of (seed, a, b).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) by 128-bit multiply-shift. The tiny modulo bias of
    // this scheme is irrelevant here; determinism is what matters.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform real in [lo, hi).
    double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double next_gauss() {
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    Rng child(std::uint64_t stream) const {
        std::uint64_t z = seed_ ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return Rng(z ^ (z >> 31));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace slf

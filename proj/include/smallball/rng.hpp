#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace smallball::rng {

// Every Monte Carlo routine in the library draws from per-chunk generators:
// chunk c of a run with seed s uses an engine seeded by mix(s, c), and one
// chunk always covers kChunkSamples logical samples. The stream is therefore
// a pure function of (seed, chunk index), independent of how chunks are
// scheduled, which is what makes sample sharing and parallel execution
// byte-reproducible.
inline constexpr std::uint64_t kChunkSamples = 4096;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded from (seed, chunk) through splitmix64.
class Engine {
public:
    Engine(std::uint64_t seed, std::uint64_t chunk) {
        std::uint64_t sm = seed ^ (0x632be59bd9b4e019ULL * (chunk + 1));
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 significant bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. Two uniforms per pair; pairs are never
    // cached across calls, so the draw count per sample is fixed.
    void next_gaussian_pair(double& g0, double& g1) {
        double u1 = next_uniform();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        g0 = r * std::cos(a);
        g1 = r * std::sin(a);
    }

    double next_gaussian() {
        double g0, g1;
        next_gaussian_pair(g0, g1);
        return g0;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Derives an independent sub-seed for a named purpose (e.g. the quadrature
// fallback inside a verify run must not share a stream with the small-ball
// estimator driven by the same config seed).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL + purpose * 0xd1b54a32d192ed03ULL);
    return splitmix64(sm);
}

// Runs fn(engine) once per sample, in chunk order. fn must consume a fixed
// number of draws per call for the stream contract to hold.
template <typename Fn>
void for_each_sample(std::uint64_t seed, std::uint64_t count, Fn&& fn) {
    const std::uint64_t chunks = (count + kChunkSamples - 1) / kChunkSamples;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        Engine eng(seed, c);
        const std::uint64_t in_chunk =
            (c + 1 == chunks) ? count - c * kChunkSamples : kChunkSamples;
        for (std::uint64_t i = 0; i < in_chunk; ++i) fn(eng);
    }
}

} // namespace smallball::rng

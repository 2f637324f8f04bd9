#pragma once

#include <cstdint>
#include <cmath>

#include "bellsim/vec3.hpp"

namespace bellsim {

/**
 * Seeded counter-keyed random stream (PCG32).
 *
 * Identified by (seed, stream-id): the same pair yields the same sample
 * sequence on every run and under every thread layout. Derived child streams
 * (substream) are pure functions of the parent identity, so splitting work
 * across k workers reproduces the exact union of samples regardless of
 * scheduling.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), inc_((mix64(stream_id) << 1u) | 1u), state_(0) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    /// Uniform double strictly inside (0, 1); one raw 32-bit draw.
    double uniform01() {
        constexpr double inv = 1.0 / 4294967296.0;
        return (static_cast<double>(next_u32()) + 0.5) * inv;
    }

    /// Child stream derived from (seed, stream-id, k). Consumes no draws.
    RngStream substream(std::uint64_t k) const {
        return RngStream(seed_, mix64(stream_id_ ^ mix64(k + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    // SplitMix64 finalizer; spreads stream ids over the full 64-bit space.
    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t inc_;
    std::uint64_t state_;
};

/**
 * Uniform direction on the unit sphere via inverse CDF: z = 2u1 - 1,
 * phi = 2 pi u2. Consumes exactly two raw draws per sample.
 */
inline UnitVector3 sample_uniform_sphere(RngStream& rng) {
    const double z = 2.0 * rng.uniform01() - 1.0;
    const double phi = 2.0 * 3.14159265358979323846 * rng.uniform01();
    const double rho = std::sqrt(1.0 - z * z);
    return UnitVector3::from_unit_components(rho * std::cos(phi), rho * std::sin(phi), z);
}

}  // namespace bellsim

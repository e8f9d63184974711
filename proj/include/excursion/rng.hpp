#ifndef EXCURSION_RNG_HPP
#define EXCURSION_RNG_HPP

#include <cstdint>

#include "excursion/normal.hpp"

namespace excursion {

// Identifier of one reproducible random stream. Path k of a Monte Carlo run
// owns stream_index k; the three Brownian-bridge components behind an
// excursion use the derived indices 3k, 3k+1, 3k+2.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

// Counter-style generator behind an RngStream. The contract is
// bit-reproducibility: the same (seed, stream_index) yields the same
// sequence on every run, at any thread count, so the scheme below is fixed:
//
//   * state derivation: both ids pass through the SplitMix64 finalizer
//     (Stafford mix13) and are xored; distinct stream indices land at
//     unrelated points of the 2^64 state space.
//   * next_u64: SplitMix64 (Vigna) — add the golden-gamma, finalize.
//   * uniforms: 53-bit mantissa, centered, so the value lies strictly
//     inside (0,1) and the normal quantile below never sees 0 or 1.
//   * gaussians: inverse-CDF transform (AS 241), one uniform per variate.
class StreamGenerator {
public:
    explicit StreamGenerator(RngStream id)
        : state_(mix64(id.seed + 0x9E3779B97F4A7C15ULL) ^
                 mix64(id.stream_index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform on (0,1), never 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal variate; consumes exactly one uniform.
    double next_gaussian() {
        return normal_quantile(next_uniform());
    }

private:
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace excursion

#endif // EXCURSION_RNG_HPP

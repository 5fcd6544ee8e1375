#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace eik {

// All randomness in the project flows through named substreams so that runs
// are bitwise reproducible across platforms. std::mt19937_64 output is fully
// specified by the standard; std::* distributions are not, so uniform doubles
// are produced by the explicit (x >> 11) * 2^-53 mapping below.
//
// Stream-splitting rule: a consumer identified by (module, purpose) derives
// its generator as substream(seed, "module.purpose[.index]"). The tag is
// hashed with FNV-1a and mixed with the user seed through splitmix64.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::mt19937_64 substream(std::uint64_t seed, std::string_view tag) {
    std::uint64_t s = seed ^ fnv1a64(tag);
    // a couple of splitmix steps decorrelate nearby seeds before seeding
    std::uint64_t mixed = splitmix64_next(s);
    mixed ^= splitmix64_next(s);
    return std::mt19937_64(mixed);
}

// uniform double in [0,1) with 53 random bits; portable by construction
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// uniform in [lo,hi)
inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

} // namespace eik

#pragma once

#include <cstdint>
#include <random>

/// Deterministic substream derivation for parallel Monte-Carlo runs.
///
/// Every random draw belongs to a substream identified by (tag, a, b), e.g.
/// (geometry, trial, attempt) or (fading, trial, draw). The substream seed is
/// a pure function of the master seed and those indices, so results are
/// independent of worker count and scheduling.
namespace eenet {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace stream {
inline constexpr std::uint64_t geometry = 0x67656F6DULL;
inline constexpr std::uint64_t fading = 0x66616465ULL;
inline constexpr std::uint64_t moments = 0x6D6F6D74ULL;
} // namespace stream

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t a = 0,
                                    std::uint64_t b = 0) {
    std::uint64_t s = master;
    std::uint64_t x = splitmix64(s);
    s = x ^ (tag * 0xD1342543DE82EF95ULL);
    x = splitmix64(s);
    s = x ^ (a * 0xDABA0B6EB09322DBULL);
    x = splitmix64(s);
    s = x ^ (b * 0x2545F4914F6CDD1DULL);
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t tag, std::uint64_t a = 0,
                                   std::uint64_t b = 0) {
    return std::mt19937_64(substream_seed(master, tag, a, b));
}

} // namespace eenet

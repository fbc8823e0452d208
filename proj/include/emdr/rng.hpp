#pragma once

#include <cstdint>
#include <random>

namespace emdr {

// splitmix64 step; used to derive independent sub-seeds from a master seed
// so results do not depend on the order in which consumers draw.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    return mix64(mix64(master ^ 0x6a09e667f3bcc908ULL) + mix64(stream) + index);
}

// Stream tags for the pipeline's independent random consumers.
namespace seed_stream {
inline constexpr std::uint64_t noise = 1;
inline constexpr std::uint64_t directions = 2;
inline constexpr std::uint64_t cv_folds = 3;
inline constexpr std::uint64_t bootstrap = 4;
} // namespace seed_stream

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace emdr

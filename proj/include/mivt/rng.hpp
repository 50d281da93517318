#pragma once

#include <cstdint>
#include <random>

namespace mivt {

using Engine = std::mt19937_64;

/// splitmix64 finaliser; full-avalanche mix of a 64-bit word.
constexpr std::uint64_t avalanche64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Derive the seed for an independent stream from a master seed and a stream
/// counter: master xor golden-ratio-incremented counter, then avalanched.
/// Streams 0,1,2,... are assigned to seed blocks within a replicate and to
/// replicate indices across a study, so results do not depend on scheduling.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t counter) noexcept {
    return avalanche64(master_seed ^ ((counter + 1) * 0x9e3779b97f4a7c15ULL));
}

inline Engine make_engine(std::uint64_t master_seed, std::uint64_t counter) {
    return Engine(derive_stream(master_seed, counter));
}

}  // namespace mivt

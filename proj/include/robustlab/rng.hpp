#pragma once

#include <cstdint>
#include <random>

namespace robustlab {

/// Identifies one deterministic random stream.
///
/// A (base_seed, stream_index) pair fully determines every draw made from
/// the stream. Work items (Monte Carlo trials, sweep rows, prior draws)
/// each get their own stream, so any parallel schedule replays the serial
/// result bit for bit.
struct RngSeed {
    std::uint64_t base_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s = h ^ b;
    h = splitmix64(s);
    return h;
}

}  // namespace detail

/// Collapses a seed into one well-mixed 64-bit engine key.
inline std::uint64_t stream_key(RngSeed seed) {
    return detail::mix2(seed.base_seed, seed.stream_index);
}

/// Derives the seed of the index-th child stream. Children of distinct
/// parents or distinct indices are independent for practical purposes.
inline RngSeed child_seed(RngSeed parent, std::uint64_t index) {
    return RngSeed{stream_key(parent), index};
}

inline std::mt19937_64 make_engine(RngSeed seed) {
    return std::mt19937_64(stream_key(seed));
}

}  // namespace robustlab

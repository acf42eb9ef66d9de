#pragma once

#include <cstdint>
#include <random>

namespace prefdyn {

// splitmix64 finalizer: a bijective 64-bit mixer. Used to derive independent
// per-instance / per-cell seeds from a base seed so parallel work is
// schedule-independent.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t base, uint64_t index) {
    return splitmix64(base ^ splitmix64(index));
}

inline std::mt19937_64 make_engine(uint64_t seed) { return std::mt19937_64(seed); }

} // namespace prefdyn

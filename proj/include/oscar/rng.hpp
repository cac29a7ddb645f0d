#pragma once

#include <cstdint>
#include <random>

namespace oscar {

// splitmix64 step; used only for seed derivation, not as the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent stream seed from a master seed and a stream index.
/// Splitting rule: hash(master XOR mix(index)); ensemble members get
/// stream = realization index, internal consumers use fixed small indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ ((stream + 1) * 0xbf58476d1ce4e5b9ULL);
    return splitmix64(s);
}

/// Uniform double in [0, 1) from the top 53 bits of a mt19937_64 draw.
/// Unlike std::uniform_real_distribution this mapping is identical on
/// every platform, which the reproducibility contract relies on.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double on [lo, hi).
inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

} // namespace oscar

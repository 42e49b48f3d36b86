#ifndef XCAUSAL_RANDOM_HPP
#define XCAUSAL_RANDOM_HPP

#include <cstdint>
#include <random>

namespace xcausal {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; spreads nearby seeds over the full state space.
constexpr std::uint64_t mix_seed(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for Monte Carlo trial `index` of a run seeded with `seed`: the run
/// seed is mixed before the xor so runs with nearby seeds do not share trials.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix_seed(mix_seed(seed) ^ index);
}

/// Independent sub-stream `stream` of `seed`, for generators that need several.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix_seed(mix_seed(seed) + 0x632be59bd9b4e019ULL * (stream + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(seed)); }

}  // namespace xcausal

#endif  // XCAUSAL_RANDOM_HPP

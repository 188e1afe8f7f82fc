#pragma once

#include <cstdint>
#include <initializer_list>

namespace cyclosense {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Folds a sequence of words into a seed. Order matters; the result depends
/// only on the values, never on when or where it is computed.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix64(base);
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p));
    }
    return h;
}

}  // namespace cyclosense

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace pilotshare {

/// All randomness in the simulator flows through mt19937_64 plus the helpers
/// below. The standard fully specifies the mt19937_64 output sequence, and we
/// avoid std::uniform_*_distribution and std::shuffle on purpose: their
/// algorithms are implementation-defined, which would break the
/// same-seed-same-bytes reproducibility contract across toolchains.
using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a_bytes(const unsigned char* data, std::size_t n,
                                 std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    return fnv1a_bytes(b, 8, h);
}

} // namespace detail

/// Derives an independent stream seed from (master, stream index, purpose tag).
/// Pure function; gives every trial/cell/run its own generator without any
/// cross coupling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::string_view tag) {
    std::uint64_t h = detail::fnv1a_u64(master, 0xCBF29CE484222325ULL);
    h = detail::fnv1a_u64(stream, h);
    h = detail::fnv1a_bytes(reinterpret_cast<const unsigned char*>(tag.data()),
                            tag.size(), h);
    return detail::splitmix64(h);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t umax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = umax - umax % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Fisher-Yates with uniform_below, so shuffles are engine-determined only.
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

} // namespace pilotshare

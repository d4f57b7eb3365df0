#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace shiftbench {

// SplitMix64 finalizer. Used both as the generator step and to fold stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Folds an ordered list of key parts into one 64-bit stream key.
constexpr std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p));
    }
    return h;
}

/// Small counter-free generator; satisfies UniformRandomBitGenerator.
///
/// The standard distributions are implementation-defined, so draws that must
/// be bit-reproducible across toolchains go through uniform_index/uniform01.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n), unbiased (rejection on the tail).
    constexpr std::uint64_t uniform_index(std::uint64_t n) noexcept {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t limit = max() - (max() % n + 1) % n;
        std::uint64_t x = (*this)();
        while (x > limit) {
            x = (*this)();
        }
        return x % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform01() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Integer uniform on the closed range [lo, hi].
    constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        return lo + static_cast<std::int64_t>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    constexpr bool coin() noexcept { return ((*this)() >> 63) != 0; }

private:
    std::uint64_t state_;
};

} // namespace shiftbench

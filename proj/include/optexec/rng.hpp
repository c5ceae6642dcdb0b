#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace optexec {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011).
/// Stateless: each (key, counter) pair maps to four independent 32-bit
/// words, so draws can be indexed by (seed, path, step) and reproduced
/// under any scheduling.
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::array<std::uint32_t, 4> ctr) {
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
            k0 += W0;
            k1 += W1;
        }
        return ctr;
    }
};

/// Pair of independent standard normals indexed by (seed, path, step).
/// Two 53-bit uniforms are assembled from the Philox block and pushed
/// through Box-Muller.
struct NormalPair {
    double z0;
    double z1;
};

inline NormalPair normal_pair(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const auto w = Philox4x32::block(
        seed, {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
               static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)});
    // (0, 1] uniforms; the +1 offset keeps log() away from zero.
    const double u1 =
        (static_cast<double>((static_cast<std::uint64_t>(w[0]) << 21) ^ (w[1] >> 11)) + 1.0) *
        (1.0 / 9007199254740993.0);
    const double u2 =
        (static_cast<double>((static_cast<std::uint64_t>(w[2]) << 21) ^ (w[3] >> 11)) + 1.0) *
        (1.0 / 9007199254740993.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace optexec

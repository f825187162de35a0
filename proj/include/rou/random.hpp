#pragma once

// Counter-based random numbers: Philox4x32-10 (Salmon et al., SC'11).
//
// Every variate is a pure function of (seed, stream, index), so a path is
// reproducible regardless of how replications are scheduled across threads.

#include <array>
#include <cstdint>

#include "rou/normal.hpp"

namespace rou::random {

using Block = std::array<std::uint32_t, 4>;

inline Block philox4x32_10(Block ctr, std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// splitmix64 finalizer.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of replication i in a batch: splitmix64(seed + (i + 1) * golden_gamma).
inline constexpr std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t i) noexcept {
    return splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15ull);
}

/// Maps 64 random bits to the open interval (0, 1).
inline constexpr double to_unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Stream identifiers; each stream is an independent sequence under one seed.
enum class Stream : std::uint32_t { Gaussian = 0, LowerBridge = 1, UpperBridge = 2 };

/// Random-access uniforms: two per Philox block.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    double uniform(Stream stream, std::uint64_t index) const noexcept {
        const Block b = block(stream, index >> 1);
        return (index & 1u) ? to_unit_open(join(b[2], b[3])) : to_unit_open(join(b[0], b[1]));
    }

    double normal(Stream stream, std::uint64_t index) const noexcept { return normal::quantile(uniform(stream, index)); }

    Block block(Stream stream, std::uint64_t block_index) const noexcept {
        return philox4x32_10({static_cast<std::uint32_t>(block_index), static_cast<std::uint32_t>(block_index >> 32),
                              static_cast<std::uint32_t>(stream), 0u},
                             key_);
    }

private:
    static constexpr std::uint64_t join(std::uint32_t lo, std::uint32_t hi) noexcept {
        return (static_cast<std::uint64_t>(hi) << 32) | lo;
    }
    std::array<std::uint32_t, 2> key_;
};

/// Sequential standard normals; the k-th draw equals CounterRng::normal(stream, k).
class NormalSequence {
public:
    NormalSequence(std::uint64_t seed, Stream stream = Stream::Gaussian) noexcept : rng_(seed), stream_(stream) {}

    double next() noexcept {
        if ((index_ & 1u) == 0) cached_ = rng_.block(stream_, index_ >> 1);
        const std::uint64_t bits = (index_ & 1u) ? (static_cast<std::uint64_t>(cached_[3]) << 32) | cached_[2]
                                                 : (static_cast<std::uint64_t>(cached_[1]) << 32) | cached_[0];
        ++index_;
        return normal::quantile(to_unit_open(bits));
    }

    std::uint64_t index() const noexcept { return index_; }

private:
    CounterRng rng_;
    Stream stream_;
    std::uint64_t index_ = 0;
    Block cached_{};
};

} // namespace rou::random

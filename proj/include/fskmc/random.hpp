#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fskmc {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xoshiro256** (Blackman & Vigna). Four words of state, so streams are
/// cheap to create per (cell, window, sub-step).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept
    {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            w = splitmix64(s);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept
    {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

/**
 * Derives an independent stream per (cell, window, sub-step[, inner task])
 * from a master seed. Streams depend only on the key, never on which worker
 * runs the cell.
 */
class SeedPolicy {
public:
    explicit SeedPolicy(std::uint64_t master_seed = 0) noexcept : master_(master_seed) {}

    std::uint64_t master_seed() const noexcept { return master_; }

    std::uint64_t seed_for(std::uint64_t cell, std::uint64_t window, std::uint64_t substep,
                           std::uint64_t inner = 0) const noexcept
    {
        std::uint64_t h = splitmix64(master_ ^ 0x5851f42d4c957f2dULL);
        h = splitmix64(h ^ cell);
        h = splitmix64(h ^ window);
        h = splitmix64(h ^ substep);
        h = splitmix64(h ^ inner);
        return h;
    }

    Rng stream(std::uint64_t cell, std::uint64_t window, std::uint64_t substep, std::uint64_t inner = 0) const noexcept
    {
        return Rng(seed_for(cell, window, substep, inner));
    }

    /// Master seed of replica r in an ensemble.
    SeedPolicy replica(std::uint64_t r) const noexcept { return SeedPolicy(splitmix64(master_ + splitmix64(r + 1))); }

private:
    std::uint64_t master_;
};

}  // namespace fskmc

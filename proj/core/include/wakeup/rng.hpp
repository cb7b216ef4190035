#pragma once

#include <cstdint>
#include <random>

namespace wakeup {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Per-trial seed for ensemble trial `trial`:
///
///     seed = splitmix64(master_seed + 0x9E3779B97F4A7C15 * trial)
///
/// i.e. the `trial`-th output of a SplitMix64 stream started at
/// `master_seed`. Trials are therefore reproducible individually.
constexpr std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                          std::uint64_t trial) noexcept {
    return splitmix64(master_seed + 0x9E3779B97F4A7C15ULL * trial);
}

/// Random source owned by a single run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // 53 high bits -> [0, 1). Implementation-independent, unlike
    // std::uniform_real_distribution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace wakeup

#pragma once

#include <cstdint>
#include <random>

#include "wakeup/rng.hpp"

namespace wakeup::detail {

// Binomial(n, p) sampler that caches its set-up for repeated draws with the
// same parameters (a batch keeps its window for a whole sample).
//
// Small means (n*p < kInversionMean) use sequential inversion of the pmf,
// one uniform per draw, starting from P(0) = (1-p)^n. Larger means fall back
// to std::binomial_distribution.
class BinomialSampler {
public:
    static constexpr double kInversionMean = 20.0;

    std::uint64_t operator()(Rng& rng, std::uint64_t n, double p);

private:
    void reset(std::uint64_t n, double p);

    std::uint64_t n_ = 0;
    double p_ = -1.0;
    bool use_std_ = false;
    double q0_ = 1.0;
    double odds_ = 0.0;
    double mean_ = 0.0;
    std::binomial_distribution<long long> dist_;
};

}  // namespace wakeup::detail

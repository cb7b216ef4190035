#include "binomial.hpp"

#include <cmath>

namespace wakeup::detail {

void BinomialSampler::reset(std::uint64_t n, double p) {
    n_ = n;
    p_ = p;
    mean_ = static_cast<double>(n) * p;
    use_std_ = mean_ >= kInversionMean;
    if (use_std_) {
        dist_ = std::binomial_distribution<long long>(static_cast<long long>(n), p);
    } else if (p < 1.0) {
        q0_ = std::exp(static_cast<double>(n) * std::log1p(-p));
        odds_ = p / (1.0 - p);
    }
}

std::uint64_t BinomialSampler::operator()(Rng& rng, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n != n_ || p != p_) reset(n, p);
    if (use_std_) return static_cast<std::uint64_t>(dist_(rng.engine()));

    const double u = rng.uniform();
    std::uint64_t k = 0;
    double pmf = q0_;
    double cdf = q0_;
    while (u >= cdf && k < n) {
        pmf *= odds_ * static_cast<double>(n - k) / static_cast<double>(k + 1);
        ++k;
        cdf += pmf;
        // Past the mode with an underflowed pmf: the remaining tail is
        // below rounding of the cdf.
        if (pmf == 0.0 && static_cast<double>(k) > mean_) break;
    }
    return k;
}

}  // namespace wakeup::detail

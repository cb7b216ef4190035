#pragma once

// Exact expectations for static Aim-High with n identical packets. Every
// slot of a sample has the same law, so survival over a sample of length L
// is f^L with f = 1 - n p (1-p)^(n-1). Built from the closed-form protocol
// description only.

#include <cmath>
#include <cstdint>

namespace oracle {

struct StaticExpectation {
    double latency = 0.0;      // E[first success slot]
    double collisions = 0.0;   // E[number of collision slots]
    double good_window = 0.0;  // P(success in a halving sample with window >= n sqrt C)
};

inline StaticExpectation static_aim_high(double n, double cost, double epsilon, double d,
                                         bool iterated = false, double slot_cap = 1e7) {
    StaticExpectation e;
    double alive = 1.0;
    double t = 0.0;
    const double x0 = std::pow(cost, epsilon);
    const double good = std::log2(n * std::sqrt(cost));
    auto sample = [&](double x, double len, bool halving) {
        const double p = std::exp2(-x);
        const double none = std::pow(1.0 - p, n);
        const double one = n * p * std::pow(1.0 - p, n - 1.0);
        const double fail = 1.0 - one;
        const double slots = fail == 1.0 ? len : (1.0 - std::pow(fail, len)) / (1.0 - fail);
        e.latency += alive * slots;
        e.collisions += alive * slots * (1.0 - none - one);
        if (halving && x >= good) e.good_window += alive * (1.0 - std::pow(fail, len));
        alive *= std::pow(fail, len);
        t += len;
    };
    auto halving_phase = [&] {
        for (double x = x0;; x -= 1.0) {
            sample(x, std::ceil(d * std::sqrt(cost) * x * std::log(2.0)), true);
            if (x - 1.0 < 1.0) break;
        }
    };
    if (!iterated) {
        halving_phase();
        for (double x = 2.0; alive > 1e-15 && t < slot_cap; x += 1.0) {
            sample(x, std::ceil(d * x * std::log(2.0)), false);
        }
        return e;
    }
    for (std::uint64_t j = 0; alive > 1e-15 && t < slot_cap; ++j) {
        halving_phase();
        double x = 2.0;
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k, x += 1.0) {
            sample(x, std::ceil(d * x * std::log(2.0)), false);
        }
    }
    return e;
}

}  // namespace oracle

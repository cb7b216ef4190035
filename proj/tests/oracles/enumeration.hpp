#pragma once

// Brute-force references. Deliberately naive: no shared code with the
// library's recurrences.

#include <bit>
#include <cstdint>
#include <vector>

namespace oracle {

struct SlotLaw {
    double empty = 0.0;
    double success = 0.0;
    double collision = 0.0;
};

// Sums all 2^n send/silent patterns.
inline SlotLaw enumerate_slot(const std::vector<double>& p) {
    SlotLaw law;
    const std::uint32_t n = static_cast<std::uint32_t>(p.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double w = 1.0;
        for (std::uint32_t i = 0; i < n; ++i) w *= (mask >> i & 1u) ? p[i] : 1.0 - p[i];
        switch (std::popcount(mask)) {
            case 0: law.empty += w; break;
            case 1: law.success += w; break;
            default: law.collision += w; break;
        }
    }
    return law;
}

// Sum over all alpha-subsets of the product of their entries.
inline double subset_product_sum(const std::vector<double>& p, unsigned alpha) {
    double total = 0.0;
    const std::uint32_t n = static_cast<std::uint32_t>(p.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) != alpha) continue;
        double prod = 1.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) prod *= p[i];
        }
        total += prod;
    }
    return total;
}

}  // namespace oracle

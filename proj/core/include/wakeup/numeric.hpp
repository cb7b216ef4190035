#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace wakeup {

// Ceiling for slot counts that are mathematically integral in exact
// arithmetic (e.g. 16^2 * 4) but may come out at 1024.0000000000002.
inline std::uint64_t ceil_count(double v) {
    const double snapped = std::nearbyint(v);
    if (std::abs(v - snapped) <= 1e-9 * std::max(1.0, std::abs(v))) {
        return static_cast<std::uint64_t>(snapped);
    }
    return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace wakeup

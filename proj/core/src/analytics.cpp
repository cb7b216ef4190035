#include "wakeup/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wakeup/error.hpp"

namespace wakeup::analytics {

Interval good_window(double n, double cost) {
    const double lo = n * std::sqrt(cost);
    return {lo, 3.0 * lo};
}

Interval good_contention(double cost) {
    const double r = std::sqrt(cost);
    return {3.0 / r, 27.0 / r};
}

Interval adequate_contention() { return {1.0 / 16.0, 1.0}; }

double w0(double cost, double epsilon) { return std::exp2(w0_log2(cost, epsilon)); }

double w0_log2(double cost, double epsilon) { return std::pow(cost, epsilon); }

double large_sample_s(double d, double cost) { return d * std::sqrt(cost) * std::log(cost); }

namespace {

void check_probs(std::span<const double> probs) {
    for (const double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probabilities must lie in [0, 1]");
    }
}

// One pass over the senders tracking P(none), P(exactly one), P(two or more).
// Each update is a convex combination, so no cancellation occurs and p = 1
// is handled exactly.
struct SenderLaw {
    double none = 1.0;
    double one = 0.0;
    double many = 0.0;
};

SenderLaw sender_law(std::span<const double> probs) {
    check_probs(probs);
    SenderLaw law;
    for (const double p : probs) {
        const double q = 1.0 - p;
        law.many += law.one * p;
        law.one = law.one * q + law.none * p;
        law.none *= q;
    }
    return law;
}

}  // namespace

double exact_success_prob(std::span<const double> probs) { return sender_law(probs).one; }
double exact_collision_prob(std::span<const double> probs) { return sender_law(probs).many; }
double exact_empty_prob(std::span<const double> probs) { return sender_law(probs).none; }

double collision_upper_bound(std::uint64_t m, double p) {
    if (m < 1) throw std::domain_error("collision_upper_bound needs m >= 1");
    const double mp = static_cast<double>(m) * p;
    if (!(p >= 0.0) || !(mp < 1.0)) throw std::domain_error("collision_upper_bound needs p < 1/m");
    return 2.0 * mp * mp / (1.0 - mp);
}

double collision_lower_bound(double con) {
    if (!(con >= 0.0 && con <= 2.0)) {
        throw std::domain_error("collision_lower_bound applies for 0 <= Con <= 2");
    }
    return con * con / (2.0 * std::exp(2.0 * con));
}

double success_lower_bound(double con) {
    if (!(con >= 0.0)) throw std::domain_error("contention must be nonnegative");
    return con / std::exp(2.0 * con);
}

double chernoff_tail(double expectation, double delta, Tail tail) {
    if (!(expectation >= 0.0)) throw std::domain_error("expectation must be nonnegative");
    if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
    if (tail == Tail::Lower && !(delta < 1.0)) {
        throw std::domain_error("lower tail needs delta < 1");
    }
    return std::exp(-delta * delta * expectation / (2.0 + delta));
}

double total_contention(std::span<const double> trace) {
    double sum = 0.0;
    for (const double c : trace) sum += c;
    return sum;
}

JensenCheck jensen_check(std::uint64_t length, double sum, double sum_sq, double cost, double k,
                         double rel_tol) {
    if (length < 1) throw std::domain_error("Jensen check needs at least one slot");
    const auto len = static_cast<double>(length);
    JensenCheck j;
    j.lhs = len * sum_sq;
    j.rhs = sum * sum;
    j.holds = j.lhs >= j.rhs * (1.0 - rel_tol);
    j.floor = cost * (k * sum) * (k * sum) / len;
    return j;
}

JensenCheck jensen_collision_floor(std::span<const double> trace, double cost, double k,
                                   double rel_tol) {
    double sum = 0.0, sum_sq = 0.0;
    for (const double c : trace) {
        sum += c;
        sum_sq += c * c;
    }
    return jensen_check(trace.size(), sum, sum_sq, cost, k, rel_tol);
}

double symmetric_sum(std::span<const double> probs, std::uint64_t alpha) {
    if (alpha < 1 || alpha > probs.size()) {
        throw std::domain_error("symmetric_sum needs 1 <= alpha <= n");
    }
    // e[j] over the prefix seen so far; update from high j to low.
    std::vector<double> e(alpha + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const std::size_t top = std::min<std::size_t>(alpha, i + 1);
        for (std::size_t j = top; j >= 1; --j) e[j] += probs[i] * e[j - 1];
    }
    return e[alpha];
}

MaximizerCheck verify_equal_maximizes(std::uint64_t n, std::uint64_t alpha, double sigma,
                                      double grid_step, double tol) {
    if (n < 2 || n > 5) throw std::domain_error("verify_equal_maximizes supports 2 <= n <= 5");
    if (alpha < 1 || alpha > n) throw std::domain_error("alpha must lie in [1, n]");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) throw std::domain_error("grid_step must be in (0, 1]");
    if (!(sigma >= 0.0) || sigma > static_cast<double>(n)) {
        throw std::domain_error("infeasible sigma: entries in [0, 1] cannot sum to it");
    }

    MaximizerCheck out;
    const std::vector<double> equal(n, sigma / static_cast<double>(n));
    out.equal_value = symmetric_sum(equal, alpha);
    out.best_grid_value = -1.0;
    out.worst_margin = std::numeric_limits<double>::infinity();

    const auto cells = static_cast<std::int64_t>(std::floor(1.0 / grid_step + 1e-9));
    // Integer unit totals whose grid sum is within step/2 of sigma.
    const auto lo_units = static_cast<std::int64_t>(std::ceil(sigma / grid_step - 0.5 - 1e-9));
    const auto hi_units = static_cast<std::int64_t>(std::floor(sigma / grid_step + 0.5 + 1e-9));

    std::vector<std::int64_t> units(n, 0);
    std::vector<double> v(n, 0.0);
    // Enumerate the first n-1 coordinates; the last absorbs the remainder.
    auto visit = [&](auto&& self, std::size_t pos, std::int64_t used) -> void {
        if (pos + 1 == n) {
            for (std::int64_t total = std::max(lo_units, used); total <= hi_units; ++total) {
                const std::int64_t last = total - used;
                if (last < 0 || last > cells) continue;
                units[pos] = last;
                for (std::size_t i = 0; i < n; ++i) {
                    v[i] = std::min(1.0, static_cast<double>(units[i]) * grid_step);
                }
                const double s = symmetric_sum(v, alpha);
                ++out.vectors;
                const double margin = out.equal_value - s;
                out.worst_margin = std::min(out.worst_margin, margin);
                if (s > out.best_grid_value) {
                    out.best_grid_value = s;
                    out.witness = v;
                }
            }
            return;
        }
        for (std::int64_t u = 0; u <= cells && used + u <= hi_units; ++u) {
            units[pos] = u;
            self(self, pos + 1, used + u);
        }
    };
    visit(visit, 0, 0);
    out.holds = out.worst_margin >= -tol;
    if (out.vectors == 0) out.worst_margin = 0.0;
    return out;
}

RegimeCheck regime_inequality(std::uint64_t n, std::int64_t cost, double epsilon) {
    if (n < 1) throw ConfigError("n", "n must be at least 1");
    if (cost < 4) throw ConfigError("C", "C must be ≥ 4");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon", "epsilon must lie in (0, 1)");
    const auto c = static_cast<double>(cost);
    const double lg_n = std::log2(static_cast<double>(n));
    RegimeCheck r;
    const double lhs = lg_n + 0.5 * std::log2(c);  // lg(n sqrt C)
    const double rhs = std::pow(c, epsilon);       // lg w0
    if (lhs <= rhs + 1e-12 * std::max(1.0, rhs)) {
        r.regime = Regime::Case1;
        return r;
    }
    r.regime = Regime::Case2;
    r.cost_bound = std::pow(2.0 * lg_n, 1.0 / epsilon);
    r.bound_holds = c < *r.cost_bound;
    return r;
}

double fit_power_law(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::domain_error("power-law fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0 && y > 0.0)) throw std::domain_error("power-law fit needs positive coordinates");
        mx += std::log(x);
        my += std::log(y);
    }
    const auto n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0) throw std::domain_error("power-law fit needs distinct x values");
    return sxy / sxx;
}

double dynamic_collision_ceiling(std::int64_t cost, double kappa) {
    if (cost < 4) throw ConfigError("C", "C must be ≥ 4");
    return kappa / static_cast<double>(cost);
}

std::optional<double> dynamic_collision_margin(std::span<const double> probs, std::int64_t cost,
                                               double kappa) {
    const double con = total_contention(probs);
    if (con > 27.0 / std::sqrt(static_cast<double>(cost))) return std::nullopt;
    return dynamic_collision_ceiling(cost, kappa) - exact_collision_prob(probs);
}

}  // namespace wakeup::analytics

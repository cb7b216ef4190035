#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wakeup::analytics {

// ---- named intervals --------------------------------------------------------

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

/// Window sizes [n sqrt C, 3 n sqrt C].
Interval good_window(double n, double cost);
/// Contention [3/sqrt C, 27/sqrt C].
Interval good_contention(double cost);
/// Contention [1/16, 1].
Interval adequate_contention();
/// Initial window 2^(C^eps); +inf once it leaves double range.
double w0(double cost, double epsilon);
/// lg of the initial window, C^eps.
double w0_log2(double cost, double epsilon);
/// Large-sample length in the dynamic setting, d sqrt(C) ln C (unrounded).
double large_sample_s(double d, double cost);

// ---- exact slot probabilities ---------------------------------------------

/// P(exactly one sender) for independent senders with the given probabilities.
/// Entries must lie in [0, 1].
double exact_success_prob(std::span<const double> probs);

/// P(two or more senders).
double exact_collision_prob(std::span<const double> probs);

/// P(no sender) = prod (1 - p_i).
double exact_empty_prob(std::span<const double> probs);

// ---- bounds ---------------------------------------------------------------

/// 2 m^2 p^2 / (1 - m p) for m equal senders; requires m >= 1, 0 <= p < 1/m.
double collision_upper_bound(std::uint64_t m, double p);

/// Con^2 / (2 e^(2 Con)) for 0 <= Con <= 2.
double collision_lower_bound(double con);

/// Con / e^(2 Con); valid as a bound when every p_i <= 1/2.
double success_lower_bound(double con);

/// Collision probability floor once contention exceeds 2 (equal senders).
constexpr double high_contention_collision_floor() noexcept { return 0.1; }

enum class Tail { Upper, Lower };

/// exp(-delta^2 E / (2 + delta)). Upper tail needs delta > 0, lower tail
/// needs 0 < delta < 1.
double chernoff_tail(double expectation, double delta, Tail tail = Tail::Upper);

// ---- contention traces ----------------------------------------------------

double total_contention(std::span<const double> trace);

/// The convexity inequality L * sum Con^2 >= (sum Con)^2 and the collision
/// cost floor C (k sum Con)^2 / L built on it.
struct JensenCheck {
    double floor = 0.0;
    double lhs = 0.0;  ///< L * sum Con^2
    double rhs = 0.0;  ///< (sum Con)^2
    bool holds = false;
};

/// `rel_tol` is the relative slack allowed on lhs >= rhs for rounding.
JensenCheck jensen_check(std::uint64_t length, double sum, double sum_sq, double cost, double k,
                         double rel_tol = 1e-9);
/// Requires a nonempty trace.
JensenCheck jensen_collision_floor(std::span<const double> trace, double cost, double k,
                                   double rel_tol = 1e-9);

// ---- symmetric sums and the equal-probability maximizer --------------------

/// Elementary symmetric polynomial e_alpha(p_1..p_n); 1 <= alpha <= n.
double symmetric_sum(std::span<const double> probs, std::uint64_t alpha);

struct MaximizerCheck {
    bool holds = true;
    double equal_value = 0.0;     ///< S at the all-equal vector sigma/n
    double best_grid_value = 0.0; ///< largest S found on the grid
    double worst_margin = 0.0;    ///< min over grid of equal_value - S(v)
    std::vector<double> witness;  ///< grid vector attaining best_grid_value
    std::uint64_t vectors = 0;    ///< grid vectors examined
};

/// Grid search over vectors with entries in {0, step, 2 step, ...} ∩ [0, 1]
/// whose sum lies within step/2 of sigma, comparing S against the equal
/// vector. Requires 2 <= n <= 5, 1 <= alpha <= n, 0 <= sigma <= n, step > 0.
MaximizerCheck verify_equal_maximizes(std::uint64_t n, std::uint64_t alpha, double sigma,
                                      double grid_step, double tol = 1e-12);

// ---- regimes --------------------------------------------------------------

enum class Regime { Case1, Case2 };

struct RegimeCheck {
    Regime regime = Regime::Case1;
    /// (2 lg n)^(1/eps), reported for Case2.
    std::optional<double> cost_bound;
    /// C < cost_bound; vacuously true for Case1.
    bool bound_holds = true;
};

/// Case1 iff n sqrt(C) <= 2^(C^eps) (boundary included).
RegimeCheck regime_inequality(std::uint64_t n, std::int64_t cost, double epsilon);

// ---- fitting --------------------------------------------------------------

/// Least-squares slope of ln y against ln x. Needs >= 2 points with distinct
/// x and positive coordinates.
double fit_power_law(std::span<const std::pair<double, double>> points);

// ---- dynamic low-contention collision ceiling --------------------------------

inline constexpr double kDefaultCollisionCeilingConstant = 800.0;

/// kappa / C: the ceiling on collision probability for slots whose total
/// contention is at most 27/sqrt(C).
double dynamic_collision_ceiling(std::int64_t cost,
                                 double kappa = kDefaultCollisionCeilingConstant);

/// ceiling - exact collision probability, or nullopt when the vector's
/// contention exceeds 27/sqrt(C) and the ceiling does not apply.
std::optional<double> dynamic_collision_margin(std::span<const double> probs, std::int64_t cost,
                                               double kappa = kDefaultCollisionCeilingConstant);

}  // namespace wakeup::analytics

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wakeup/adversary.hpp"
#include "wakeup/engine.hpp"
#include "wakeup/protocols.hpp"

namespace wakeup::verification {

/// Outcome of one named check. A margin is the signed slack of the checked
/// inequality (negative = violated); worst_margin is its minimum over the
/// sweep, 0 when nothing was swept.
struct CheckResult {
    std::string name;
    std::uint64_t parameters_swept = 0;
    std::uint64_t violations = 0;
    double worst_margin = 0.0;

    bool passed() const noexcept { return violations == 0; }
};

struct Report {
    std::vector<CheckResult> checks;

    bool passed() const noexcept;
    std::vector<std::string> failing() const;
    /// {"checks": [{lemma, parameters_swept, violations, worst_margin}, ...],
    ///  "passed": bool}; object keys sorted.
    nlohmann::json to_json() const;
};

/// The closed forms under test. Defaults are the analytics functions;
/// replacing one lets a test confirm the suite notices a wrong bound.
struct Bounds {
    std::function<double(std::uint64_t, double)> collision_upper;
    std::function<double(double)> collision_lower;
    std::function<double(double)> success_lower;
    std::function<double()> high_contention_floor;
    std::function<double(std::int64_t)> dynamic_ceiling;

    static Bounds defaults();
};

inline constexpr double kIdentityTolerance = 1e-12;

// Individual checks; names in parentheses.
CheckResult check_collision_upper_bound(const Bounds& b);   // (collision_upper_bound)
CheckResult check_collision_lower_bound(const Bounds& b);   // (collision_lower_bound)
CheckResult check_success_lower_bound(const Bounds& b, std::uint64_t seed);  // (success_lower_bound)
CheckResult check_high_contention_floor(const Bounds& b);   // (high_contention_floor)
CheckResult check_equal_maximizes(double grid_step = 0.01); // (equal_probabilities_maximize)
CheckResult check_dynamic_collision_ceiling(const Bounds& b, std::uint64_t seed);
CheckResult check_exponential_facts();                      // (exponential_facts)
CheckResult check_probability_closure(std::uint64_t seed);  // (probability_closure)
CheckResult check_brute_force_equivalence(std::uint64_t seed);
CheckResult check_symmetric_sum_enumeration(std::uint64_t seed);
CheckResult check_jensen_inequality(std::uint64_t seed);

/// Every closed-form check above.
Report run_lemma_suite(const Bounds& bounds = Bounds::defaults(), std::uint64_t seed = 20240601);

// ---- trace audits -----------------------------------------------------------

struct RewindAudit {
    std::uint64_t slots_seen = 0;
    std::uint64_t audited = 0;
    std::uint64_t violations = 0;
    double worst_margin = 0.0;  ///< relative to Con(t); 0 when nothing audited
    std::optional<std::uint64_t> first_violation_slot;
};

/// Checks Con(t - s) in [Con(t)/3, Con(t)/2] at every slot t with t <= t*,
/// every active packet halving, Con(t) >= 3/sqrt(C) and t - s >= 1, where
/// s is the dynamic halving sample length. Keeps the last s contentions.
class RewindAuditor {
public:
    /// Requires a dynamic Aim-High-family config.
    RewindAuditor(const ProtocolConfig& config, const InjectionSchedule& schedule,
                  double rel_tol = 1e-9);

    void observe(const SlotView& view);
    /// Forwards to observe(); the auditor must outlive the returned function.
    SlotObserver observer();

    std::uint64_t sample_length() const noexcept { return s_; }
    const RewindAudit& result() const noexcept { return audit_; }

private:
    std::uint64_t s_;
    double floor_;
    TStar t_star_;
    double rel_tol_;
    std::deque<double> window_;
    RewindAudit audit_;
};

/// Replays `schedule` with no success ever observed. While nothing succeeds
/// every sending probability is a deterministic function of the slot, so
/// this trajectory is the one any surviving run follows. Stops at `horizon`
/// or once every packet has been injected and none is halving.
RewindAudit audit_success_free_trajectory(const ProtocolConfig& config,
                                          const InjectionSchedule& schedule,
                                          std::uint64_t horizon, double rel_tol = 1e-9);

struct TraceSuiteOptions {
    std::uint64_t trials = 50;
    std::uint64_t master_seed = 1;
    std::uint64_t slot_cap = 10'000'000;
    SimulationPath path = SimulationPath::Batched;
    /// Zero means last injection slot + (C^eps + 2) * s.
    std::uint64_t horizon = 0;
};

/// Rewind audit on the success-free trajectory and on sampled runs, plus
/// the convexity inequality on each sampled run's contention sums.
Report run_trace_suite(const ProtocolConfig& config, const InjectionSchedule& schedule,
                       const TraceSuiteOptions& options = {});

}  // namespace wakeup::verification

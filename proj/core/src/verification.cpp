#include "wakeup/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "wakeup/analytics.hpp"
#include "wakeup/error.hpp"
#include "wakeup/rng.hpp"

namespace wakeup::verification {

namespace an = wakeup::analytics;

bool Report::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::vector<std::string> Report::failing() const {
    std::vector<std::string> names;
    for (const auto& c : checks) {
        if (!c.passed()) names.push_back(c.name);
    }
    return names;
}

nlohmann::json Report::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks) {
        list.push_back({{"lemma", c.name},
                        {"parameters_swept", c.parameters_swept},
                        {"violations", c.violations},
                        {"worst_margin", c.worst_margin}});
    }
    return {{"checks", std::move(list)}, {"passed", passed()}};
}

Bounds Bounds::defaults() {
    Bounds b;
    b.collision_upper = [](std::uint64_t m, double p) { return an::collision_upper_bound(m, p); };
    b.collision_lower = [](double con) { return an::collision_lower_bound(con); };
    b.success_lower = [](double con) { return an::success_lower_bound(con); };
    b.high_contention_floor = [] { return an::high_contention_collision_floor(); };
    b.dynamic_ceiling = [](std::int64_t cost) { return an::dynamic_collision_ceiling(cost); };
    return b;
}

namespace {

// Accumulates margins; a margin below -tol is a violation.
class Tally {
public:
    Tally(std::string name, double tol = kIdentityTolerance) : tol_(tol) { r_.name = std::move(name); }

    void add(double margin) {
        if (r_.parameters_swept == 0 || margin < r_.worst_margin) r_.worst_margin = margin;
        ++r_.parameters_swept;
        if (!(margin >= -tol_)) ++r_.violations;
    }

    CheckResult done() const { return r_; }

private:
    CheckResult r_;
    double tol_;
};

std::vector<double> equal_vector(std::uint64_t n, double p) { return std::vector<double>(n, p); }

std::vector<double> random_vector(Rng& rng, std::size_t n, double max_entry) {
    std::vector<double> v(n);
    for (auto& p : v) p = rng.uniform() * max_entry;
    return v;
}

// Vectors that include the exact endpoints 0 and 1 and values close to 1.
std::vector<double> edgy_vector(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& p : v) {
        switch (rng.below(5)) {
            case 0: p = 0.0; break;
            case 1: p = 1.0; break;
            case 2: p = 1.0 - rng.uniform() * 1e-3; break;
            default: p = rng.uniform(); break;
        }
    }
    return v;
}

}  // namespace

CheckResult check_collision_upper_bound(const Bounds& b) {
    Tally t("collision_upper_bound");
    for (std::uint64_t m = 2; m <= 64; ++m) {
        for (int k = 1; k <= 200; ++k) {
            const double p = static_cast<double>(k) / (201.0 * static_cast<double>(m));
            const auto v = equal_vector(m, p);
            t.add(b.collision_upper(m, p) - an::exact_collision_prob(v));
        }
    }
    return t.done();
}

CheckResult check_collision_lower_bound(const Bounds& b) {
    Tally t("collision_lower_bound");
    for (std::uint64_t n = 2; n <= 64; ++n) {
        for (int k = 1; k <= 200; ++k) {
            const double con = 2.0 * static_cast<double>(k) / 200.0;
            const auto v = equal_vector(n, con / static_cast<double>(n));
            t.add(an::exact_collision_prob(v) - b.collision_lower(con));
        }
    }
    return t.done();
}

CheckResult check_success_lower_bound(const Bounds& b, std::uint64_t seed) {
    Tally t("success_lower_bound");
    Rng rng(seed);
    for (int i = 0; i < 10'000; ++i) {
        const auto v = random_vector(rng, 1 + rng.below(10), 0.5);
        t.add(an::exact_success_prob(v) - b.success_lower(an::total_contention(v)));
    }
    return t.done();
}

CheckResult check_high_contention_floor(const Bounds& b) {
    Tally t("high_contention_floor");
    for (std::uint64_t n = 3; n <= 128; ++n) {
        const double lo = 2.0 / static_cast<double>(n);
        for (int k = 1; k <= 200; ++k) {
            const double p = std::min(1.0, lo + (1.0 - lo) * static_cast<double>(k) / 200.0);
            const auto v = equal_vector(n, p);
            t.add(an::exact_collision_prob(v) - b.high_contention_floor());
        }
    }
    return t.done();
}

CheckResult check_equal_maximizes(double grid_step) {
    CheckResult r{"equal_probabilities_maximize", 0, 0, 0.0};
    bool first = true;
    for (std::uint64_t n = 2; n <= 4; ++n) {
        for (std::uint64_t alpha = 2; alpha <= n; ++alpha) {
            for (const double sigma : {0.1, 0.5, 1.0}) {
                const auto m = an::verify_equal_maximizes(n, alpha, sigma, grid_step);
                r.parameters_swept += m.vectors;
                if (!m.holds) ++r.violations;
                if (first || m.worst_margin < r.worst_margin) r.worst_margin = m.worst_margin;
                first = false;
            }
        }
    }
    return r;
}

CheckResult check_dynamic_collision_ceiling(const Bounds& b, std::uint64_t seed) {
    Tally t("dynamic_collision_ceiling");
    Rng rng(seed);
    const std::int64_t costs[] = {4, 16, 64, 256, 729, 1024, 4096, 16384, 65536};
    for (const std::int64_t cost : costs) {
        const double scope = 27.0 / std::sqrt(static_cast<double>(cost));
        auto probe = [&](const std::vector<double>& v) {
            if (an::total_contention(v) > scope) return;
            t.add(b.dynamic_ceiling(cost) - an::exact_collision_prob(v));
        };
        for (std::uint64_t n = 1; n <= 64; ++n) {
            for (const double f : {0.25, 0.5, 1.0}) {
                const double p = f * scope / static_cast<double>(n);
                if (p <= 1.0) probe(equal_vector(n, p));
            }
        }
        for (int i = 0; i < 500; ++i) {
            auto v = random_vector(rng, 1 + rng.below(20), 1.0);
            const double sum = an::total_contention(v);
            if (sum == 0.0) continue;
            const double scale = rng.uniform() * scope / sum;
            for (auto& p : v) p = std::min(1.0, p * scale);
            probe(v);
        }
    }
    return t.done();
}

CheckResult check_exponential_facts() {
    Tally t("exponential_facts");
    for (int k = 0; k <= 1000; ++k) {
        const double x = -5.0 + 10.0 * static_cast<double>(k) / 1000.0;
        t.add(std::exp(-x) - (1.0 - x));
    }
    for (int k = 0; k <= 500; ++k) {
        const double x = 0.5 * static_cast<double>(k) / 500.0;
        t.add((1.0 - x) - std::exp(-2.0 * x));
    }
    return t.done();
}

CheckResult check_probability_closure(std::uint64_t seed) {
    Tally t("probability_closure");
    Rng rng(seed);
    for (int i = 0; i < 5000; ++i) {
        const auto v = edgy_vector(rng, rng.below(31));
        const double total =
            an::exact_success_prob(v) + an::exact_collision_prob(v) + an::exact_empty_prob(v);
        t.add(-std::abs(total - 1.0));
    }
    return t.done();
}

CheckResult check_brute_force_equivalence(std::uint64_t seed) {
    Tally t("brute_force_equivalence");
    Rng rng(seed);
    for (std::size_t n = 0; n <= 12; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto v = edgy_vector(rng, n);
            double one = 0.0, many = 0.0;
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                double w = 1.0;
                for (std::size_t i = 0; i < n; ++i) w *= (mask >> i & 1u) ? v[i] : 1.0 - v[i];
                const int senders = std::popcount(mask);
                if (senders == 1) one += w;
                if (senders >= 2) many += w;
            }
            t.add(-std::abs(an::exact_success_prob(v) - one));
            t.add(-std::abs(an::exact_collision_prob(v) - many));
        }
    }
    return t.done();
}

CheckResult check_symmetric_sum_enumeration(std::uint64_t seed) {
    Tally t("symmetric_sum_enumeration");
    Rng rng(seed);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto v = random_vector(rng, n, 1.0);
            for (std::uint64_t alpha = 1; alpha <= n; ++alpha) {
                double naive = 0.0;
                for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                    if (static_cast<std::uint64_t>(std::popcount(mask)) != alpha) continue;
                    double prod = 1.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (mask >> i & 1u) prod *= v[i];
                    }
                    naive += prod;
                }
                t.add(-std::abs(an::symmetric_sum(v, alpha) - naive));
            }
        }
    }
    return t.done();
}

CheckResult check_jensen_inequality(std::uint64_t seed) {
    Tally t("jensen_inequality");
    Rng rng(seed);
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> trace(1 + rng.below(200));
        for (auto& c : trace) c = rng.below(4) == 0 ? 0.0 : rng.uniform() * 3.0;
        const auto j = an::jensen_collision_floor(trace, 64.0, 1.0);
        t.add((j.lhs - j.rhs) / std::max(1.0, j.rhs));
    }
    return t.done();
}

Report run_lemma_suite(const Bounds& bounds, std::uint64_t seed) {
    Report r;
    r.checks.push_back(check_collision_upper_bound(bounds));
    r.checks.push_back(check_collision_lower_bound(bounds));
    r.checks.push_back(check_success_lower_bound(bounds, seed));
    r.checks.push_back(check_high_contention_floor(bounds));
    r.checks.push_back(check_equal_maximizes());
    r.checks.push_back(check_dynamic_collision_ceiling(bounds, seed + 1));
    r.checks.push_back(check_exponential_facts());
    r.checks.push_back(check_probability_closure(seed + 2));
    r.checks.push_back(check_brute_force_equivalence(seed + 3));
    r.checks.push_back(check_symmetric_sum_enumeration(seed + 4));
    r.checks.push_back(check_jensen_inequality(seed + 5));
    return r;
}

// ---- trace audits -----------------------------------------------------------

namespace {

void require_dynamic_aim_high(const ProtocolConfig& config) {
    if (config.setting() != ClockSetting::Dynamic) {
        throw ConfigError("setting", "the rewind audit needs the dynamic setting");
    }
    if (!config.is_aim_high_family()) {
        throw ConfigError("protocol", "the rewind audit needs an Aim-High protocol");
    }
}

}  // namespace

RewindAuditor::RewindAuditor(const ProtocolConfig& config, const InjectionSchedule& schedule,
                             double rel_tol)
    : s_((require_dynamic_aim_high(config),
          wakeup::sample_length(config, config.initial_exponent(), Phase::Halving))),
      floor_(3.0 / config.sqrt_cost()),
      t_star_(classify_t_star(schedule, config.cost(), config.epsilon())),
      rel_tol_(rel_tol) {}

void RewindAuditor::observe(const SlotView& view) {
    ++audit_.slots_seen;
    // window_.front() is Con(t - s) once s earlier slots are held.
    if (window_.size() == s_) {
        if (view.all_halving && t_star_.covers(view.slot) && view.contention >= floor_) {
            const double con = view.contention;
            const double back = window_.front();
            const double margin = std::min(back - con / 3.0, con / 2.0 - back) / con;
            if (audit_.audited == 0 || margin < audit_.worst_margin) audit_.worst_margin = margin;
            ++audit_.audited;
            if (margin < -rel_tol_) {
                ++audit_.violations;
                if (!audit_.first_violation_slot) audit_.first_violation_slot = view.slot;
            }
        }
        window_.pop_front();
    }
    window_.push_back(view.contention);
}

SlotObserver RewindAuditor::observer() {
    return [this](const SlotView& v) { observe(v); };
}

RewindAudit audit_success_free_trajectory(const ProtocolConfig& config,
                                          const InjectionSchedule& schedule,
                                          std::uint64_t horizon, double rel_tol) {
    RewindAuditor auditor(config, schedule, rel_tol);
    struct Batch {
        PacketState state;
        double count;
    };
    std::vector<Batch> batches;
    const auto& entries = schedule.entries();
    std::size_t next = 0;
    std::uint64_t active = 0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        if (next < entries.size() && entries[next].slot == t) {
            batches.push_back({init_state(config, t), static_cast<double>(entries[next].count)});
            active += entries[next].count;
            ++next;
        }
        double con = 0.0;
        bool all_halving = true;
        for (const auto& b : batches) {
            con += b.count * std::exp2(-b.state.exponent);
            all_halving = all_halving && b.state.phase == Phase::Halving;
        }
        auditor.observe(SlotView{t, con, SlotKind::Empty, active, all_halving});
        bool any_halving = false;
        for (auto& b : batches) {
            b.state = step(b.state, config, false);
            any_halving = any_halving || b.state.phase == Phase::Halving;
        }
        if (next == entries.size() && !any_halving) break;
    }
    return auditor.result();
}

Report run_trace_suite(const ProtocolConfig& config, const InjectionSchedule& schedule,
                       const TraceSuiteOptions& options) {
    require_dynamic_aim_high(config);
    Report report;
    const std::uint64_t s = sample_length(config, config.initial_exponent(), Phase::Halving);
    const std::uint64_t horizon =
        options.horizon != 0
            ? options.horizon
            : schedule.last_injection_slot() +
                  static_cast<std::uint64_t>(std::ceil(config.initial_exponent()) + 2.0) * s;

    const RewindAudit free_run = audit_success_free_trajectory(config, schedule, horizon);
    report.checks.push_back({"rewind_success_free", free_run.audited, free_run.violations,
                             free_run.worst_margin});

    CheckResult sampled{"rewind_sampled_runs", 0, 0, 0.0};
    Tally jensen("jensen_sampled_runs", 1e-9);
    for (std::uint64_t trial = 0; trial < options.trials; ++trial) {
        RewindAuditor auditor(config, schedule);
        SimulationOptions sim;
        sim.slot_cap = options.slot_cap;
        sim.record_traces = false;
        sim.observer = auditor.observer();
        const std::uint64_t seed = derive_trial_seed(options.master_seed, trial);
        const RunRecord run = options.path == SimulationPath::Batched
                                  ? simulate_batched(config, schedule, seed, sim)
                                  : simulate(config, schedule, seed, sim);
        const auto& a = auditor.result();
        if (a.audited > 0 && (sampled.parameters_swept == 0 || a.worst_margin < sampled.worst_margin)) {
            sampled.worst_margin = a.worst_margin;
        }
        sampled.parameters_swept += a.audited;
        sampled.violations += a.violations;

        const auto j = an::jensen_check(run.slots, run.contention_sum, run.contention_sq_sum,
                                        static_cast<double>(config.cost()), 1.0);
        jensen.add((j.lhs - j.rhs) / std::max(1.0, j.rhs));
    }
    report.checks.push_back(sampled);
    report.checks.push_back(jensen.done());
    return report;
}

}  // namespace wakeup::verification

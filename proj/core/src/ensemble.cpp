#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "wakeup/engine.hpp"
#include "wakeup/error.hpp"
#include "wakeup/rng.hpp"

namespace wakeup {

RunSummary summarize_run(const RunRecord& run, std::uint64_t trial, const ProtocolConfig& config,
                         std::uint64_t n) {
    RunSummary s;
    s.trial = trial;
    s.seed = run.seed;
    s.latency = run.latency;
    s.collisions = run.collision_count;
    s.collision_cost = run.collision_cost;
    s.termination = run.termination;
    s.success_slot = run.success_slot;
    s.winner_batch = run.winner_batch;
    s.success_phase = run.success_phase;
    s.success_exponent = run.success_exponent;
    if (config.setting() == ClockSetting::Static && config.is_aim_high_family()) {
        s.good_window = good_window_marker(run, n, config.cost());
    }
    s.slots = run.slots;
    s.contention_sum = run.contention_sum;
    s.contention_sq_sum = run.contention_sq_sum;
    return s;
}

double EnsembleStats::latency_stderr() const noexcept {
    return trials > 0 ? latency_stddev / std::sqrt(static_cast<double>(trials)) : 0.0;
}

namespace {

double nearest_rank(const std::vector<std::uint64_t>& sorted, double q) {
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return static_cast<double>(sorted[rank - 1]);
}

}  // namespace

EnsembleStats aggregate(const std::vector<RunSummary>& runs) {
    EnsembleStats st;
    st.trials = runs.size();
    if (runs.empty()) return st;

    double lat = 0.0, cost = 0.0, coll = 0.0, term = 0.0, good = 0.0;
    bool has_good = false;
    std::vector<std::uint64_t> latencies;
    latencies.reserve(runs.size());
    for (const auto& r : runs) {
        lat += static_cast<double>(r.latency);
        cost += static_cast<double>(r.collision_cost);
        coll += static_cast<double>(r.collisions);
        term += r.termination == Termination::Success ? 1.0 : 0.0;
        if (r.good_window) {
            has_good = true;
            good += *r.good_window ? 1.0 : 0.0;
        }
        latencies.push_back(r.latency);
    }
    const auto n = static_cast<double>(runs.size());
    st.mean_latency = lat / n;
    st.mean_collision_cost = cost / n;
    st.mean_collisions = coll / n;
    st.frac_terminated = term / n;
    if (has_good) st.frac_success_at_or_before_good_window = good / n;

    if (runs.size() > 1) {
        double ss = 0.0;
        for (const auto& r : runs) {
            const double dev = static_cast<double>(r.latency) - st.mean_latency;
            ss += dev * dev;
        }
        st.latency_stddev = std::sqrt(ss / (n - 1.0));
    }

    std::sort(latencies.begin(), latencies.end());
    st.latency_p50 = nearest_rank(latencies, 0.50);
    st.latency_p95 = nearest_rank(latencies, 0.95);
    st.latency_p99 = nearest_rank(latencies, 0.99);
    return st;
}

unsigned resolve_thread_count(unsigned requested) noexcept {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

unsigned threads_from_environment() {
    const char* raw = std::getenv("WAKEUP_SIM_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    const std::string text(raw);
    if (text.find_first_not_of("0123456789") != std::string::npos || text.size() > 6) {
        throw ConfigError("WAKEUP_SIM_THREADS", "WAKEUP_SIM_THREADS must be a nonnegative integer");
    }
    return static_cast<unsigned>(std::stoul(text));
}

EnsembleResult run_ensemble(const ProtocolConfig& config, const InjectionSchedule& schedule,
                            std::uint64_t trials, std::uint64_t master_seed,
                            const EnsembleOptions& options) {
    if (trials < 1) throw ConfigError("trials", "trials must be at least 1");
    SimulationOptions sim;
    sim.slot_cap = options.slot_cap;
    sim.record_traces = false;

    EnsembleResult result;
    result.runs.resize(trials);

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::uint64_t i = next++; i < trials; i = next++) {
                const std::uint64_t seed = derive_trial_seed(master_seed, i);
                const RunRecord run = options.path == SimulationPath::Batched
                                          ? simulate_batched(config, schedule, seed, sim)
                                          : simulate(config, schedule, seed, sim);
                result.runs[i] = summarize_run(run, i, config, schedule.total());
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = trials;
        }
    };

    const unsigned threads = static_cast<unsigned>(
        std::min<std::uint64_t>(resolve_thread_count(options.threads), trials));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    result.stats = aggregate(result.runs);
    return result;
}

}  // namespace wakeup

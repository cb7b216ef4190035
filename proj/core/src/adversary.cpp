#include "wakeup/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "wakeup/error.hpp"
#include "wakeup/numeric.hpp"
#include "wakeup/protocols.hpp"

namespace wakeup {

namespace {

[[noreturn]] void bad_schedule(const std::string& what) { throw ConfigError("schedule", what); }

std::uint64_t positive(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError(key, "schedule parameter '" + key + "' is required");
    const double v = it->second;
    if (!(v >= 1.0) || v != std::floor(v) || v > 9.0e15) {
        throw ConfigError(key, "schedule parameter '" + key + "' must be a positive integer");
    }
    return static_cast<std::uint64_t>(v);
}

double real(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError(key, "schedule parameter '" + key + "' is required");
    return it->second;
}

void require_n(std::uint64_t n) {
    if (n < 1) throw ConfigError("n", "n must be at least 1");
}

}  // namespace

InjectionSchedule::InjectionSchedule(std::vector<Injection> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) bad_schedule("schedule has no injections");
    if (entries_.front().slot != 1) bad_schedule("first injection must be at slot 1");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].count == 0) bad_schedule("injection counts must be positive");
        if (i > 0 && entries_[i].slot <= entries_[i - 1].slot) {
            bad_schedule("injection slots must be strictly increasing");
        }
        total_ += entries_[i].count;
    }
}

std::uint64_t InjectionSchedule::active_by(std::uint64_t slot) const noexcept {
    std::uint64_t n = 0;
    for (const auto& e : entries_) {
        if (e.slot > slot) break;
        n += e.count;
    }
    return n;
}

nlohmann::json InjectionSchedule::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : entries_) rows.push_back({e.slot, e.count});
    return nlohmann::json{{"entries", rows}};
}

InjectionSchedule InjectionSchedule::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        bad_schedule("schedule JSON must be an object with an \"entries\" array");
    }
    std::vector<Injection> entries;
    for (const auto& row : doc["entries"]) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number_unsigned() ||
            !row[1].is_number_unsigned()) {
            bad_schedule("each schedule entry must be [slot, count] with nonnegative integers");
        }
        entries.push_back({row[0].get<std::uint64_t>(), row[1].get<std::uint64_t>()});
    }
    return InjectionSchedule(std::move(entries));
}

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::AllAtOnce: return "all_at_once";
        case ScheduleKind::TwoBurst: return "two_burst";
        case ScheduleKind::Drip: return "drip";
        case ScheduleKind::AntiGap: return "anti_gap";
        case ScheduleKind::SpikeBeforeGoodContention: return "spike_before_good_contention";
        case ScheduleKind::BurstThenDrip: return "burst_then_drip";
    }
    return "?";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
    for (auto k : {ScheduleKind::AllAtOnce, ScheduleKind::TwoBurst, ScheduleKind::Drip,
                   ScheduleKind::AntiGap, ScheduleKind::SpikeBeforeGoodContention,
                   ScheduleKind::BurstThenDrip}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("schedule", "unknown schedule kind '" + name + "'");
}

InjectionSchedule all_at_once(std::uint64_t n) {
    require_n(n);
    return InjectionSchedule({{1, n}});
}

InjectionSchedule two_burst(std::uint64_t n, std::uint64_t second_slot, std::uint64_t split) {
    require_n(n);
    if (split < 1 || split > n) throw ConfigError("split", "split must lie in [1, n]");
    if (split == n) return InjectionSchedule({{1, n}});
    if (second_slot < 2) throw ConfigError("t2", "second burst must come after slot 1");
    return InjectionSchedule({{1, split}, {second_slot, n - split}});
}

InjectionSchedule drip(std::uint64_t n, std::uint64_t interval) {
    require_n(n);
    if (interval < 1) throw ConfigError("interval", "drip interval must be positive");
    std::vector<Injection> e;
    e.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) e.push_back({1 + i * interval, 1});
    return InjectionSchedule(std::move(e));
}

InjectionSchedule anti_gap(std::uint64_t n, std::uint64_t gamma) {
    if (gamma < 2) throw ConfigError("gamma", "anti-gap spacing needs gamma >= 2");
    return drip(n, gamma - 1);
}

InjectionSchedule burst_then_drip(std::uint64_t n, std::uint64_t burst, std::uint64_t interval) {
    require_n(n);
    if (burst < 1 || burst > n) throw ConfigError("burst", "burst must lie in [1, n]");
    if (interval < 1) throw ConfigError("interval", "drip interval must be positive");
    std::vector<Injection> e{{1, burst}};
    for (std::uint64_t i = 1; i <= n - burst; ++i) e.push_back({1 + i * interval, 1});
    return InjectionSchedule(std::move(e));
}

InjectionSchedule spike_before_good_contention(std::uint64_t n, std::int64_t cost, double epsilon,
                                               std::int64_t d) {
    require_n(n);
    const ProtocolConfig config({.cost = cost,
                                 .epsilon = epsilon,
                                 .d = d,
                                 .setting = ClockSetting::Dynamic,
                                 .kind = ProtocolKind::AimHigh});
    const double x0 = config.initial_exponent();
    const double first_log2 = x0 - 0.5 * std::log2(static_cast<double>(cost));
    if (first_log2 < 0.0) {
        throw ConfigError("C", "w0 / sqrt(C) < 1: no first batch fits under the threshold");
    }
    const double first_real = std::floor(std::exp2(first_log2));
    if (first_real >= static_cast<double>(n)) {
        throw ConfigError("n", "n must exceed floor(w0 / sqrt(C)) to leave packets for the spike");
    }
    const auto first = static_cast<std::uint64_t>(first_real);
    const std::uint64_t s = sample_length(config, x0, Phase::Halving);
    const double target = 3.0 / config.sqrt_cost();

    // Halving sample k runs at exponent x0 - k, starting in slot 1 + k*s.
    for (std::uint64_t k = 0; x0 - static_cast<double>(k) >= 1.0; ++k) {
        const double con = first_real * std::exp2(-(x0 - static_cast<double>(k)));
        if (con >= target) {
            const std::uint64_t trigger = 1 + k * s;
            return InjectionSchedule({{1, first}, {trigger - 1, n - first}});
        }
    }
    throw ConfigError("C", "first batch never reaches contention 3/sqrt(C) during halving");
}

InjectionSchedule make_schedule(ScheduleKind kind, std::uint64_t n,
                                const std::map<std::string, double>& params) {
    switch (kind) {
        case ScheduleKind::AllAtOnce: return all_at_once(n);
        case ScheduleKind::TwoBurst:
            return two_burst(n, positive(params, "t2"), positive(params, "split"));
        case ScheduleKind::Drip: return drip(n, positive(params, "interval"));
        case ScheduleKind::AntiGap: return anti_gap(n, positive(params, "gamma"));
        case ScheduleKind::SpikeBeforeGoodContention:
            return spike_before_good_contention(n, static_cast<std::int64_t>(positive(params, "C")),
                                                real(params, "epsilon"),
                                                static_cast<std::int64_t>(positive(params, "d")));
        case ScheduleKind::BurstThenDrip:
            return burst_then_drip(n, positive(params, "burst"), positive(params, "interval"));
    }
    throw ConfigError("schedule", "unknown schedule kind");
}

TStar classify_t_star(const InjectionSchedule& schedule, std::int64_t cost, double epsilon) {
    const double x0 = std::pow(static_cast<double>(cost), epsilon);
    TStar out;
    out.threshold = std::exp2(x0) / std::sqrt(static_cast<double>(cost));
    const double limit = out.threshold * (1.0 + 1e-12);
    std::uint64_t n = 0;
    for (const auto& e : schedule.entries()) {
        n += e.count;
        if (static_cast<double>(n) > limit) {
            out.slot = e.slot - 1;
            return out;
        }
    }
    return out;
}

std::uint64_t gap_threshold(std::uint64_t n, double epsilon, double kappa) {
    if (n < 4) throw ConfigError("n", "gap threshold needs n >= 4");
    if (!(kappa > 0.0)) throw ConfigError("kappa", "kappa must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon", "epsilon must lie in (0, 1)");
    const double lg = std::log2(static_cast<double>(n));
    return ceil_count(kappa * std::pow(lg, 1.0 + 1.0 / (2.0 * epsilon)) * std::log2(lg));
}

std::vector<Gap> find_gaps(const InjectionSchedule& schedule, std::uint64_t gamma,
                           std::uint64_t horizon) {
    if (gamma < 1) throw ConfigError("gamma", "gamma must be positive");
    std::vector<Gap> gaps;
    auto consider = [&](std::uint64_t first, std::uint64_t last) {
        if (first > last) return;
        const std::uint64_t len = last - first + 1;
        if (len >= gamma) gaps.push_back({first, len});
    };
    std::uint64_t free_from = 1;
    for (const auto& e : schedule.entries()) {
        if (e.slot > horizon) break;
        if (e.slot > free_from) consider(free_from, e.slot - 1);
        free_from = e.slot + 1;
    }
    consider(free_from, horizon);
    return gaps;
}

RegimeReport regime_report(const InjectionSchedule& schedule, std::int64_t cost, double epsilon,
                           double kappa, std::uint64_t horizon) {
    RegimeReport r;
    r.t_star = classify_t_star(schedule, cost, epsilon);
    r.gamma = gap_threshold(schedule.total(), epsilon, kappa);
    r.gaps = find_gaps(schedule, r.gamma, horizon);
    return r;
}

}  // namespace wakeup

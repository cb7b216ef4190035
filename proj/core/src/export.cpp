#include "wakeup/export.hpp"

#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

namespace wakeup {

std::string csv_field(std::string_view raw) {
    if (raw.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(raw);
    std::string out = "\"";
    for (const char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_run_csv(std::ostream& out, std::span<const RunSummary> runs, std::string_view echo) {
    if (!echo.empty()) out << "# " << echo << '\n';
    out << kRunCsvHeader << '\n';
    for (const auto& r : runs) {
        out << r.trial << ',' << r.seed << ',' << r.latency << ',' << r.collisions << ','
            << r.collision_cost << ',' << csv_field(to_string(r.termination)) << ','
            << r.success_slot << ',';
        if (r.winner_batch) out << *r.winner_batch;
        out << '\n';
    }
}

void write_trace_ndjson(std::ostream& out, const RunRecord& run, std::string_view echo) {
    if (run.contention_trace.size() != run.slots || run.outcome_trace.size() != run.slots) {
        throw std::invalid_argument("run was recorded without traces");
    }
    if (!echo.empty()) out << nlohmann::json{{"config", std::string(echo)}}.dump() << '\n';
    for (std::size_t i = 0; i < run.slots; ++i) {
        nlohmann::json row{{"t", i + 1},
                           {"con", run.contention_trace[i]},
                           {"outcome", std::string(to_string(run.outcome_trace[i]))}};
        out << row.dump() << '\n';
    }
}

nlohmann::json to_json(const EnsembleStats& s) {
    nlohmann::json j{
        {"trials", s.trials},
        {"mean_latency", s.mean_latency},
        {"latency_stddev", s.latency_stddev},
        {"mean_collision_cost", s.mean_collision_cost},
        {"mean_collisions", s.mean_collisions},
        {"latency_quantiles", {{"p50", s.latency_p50}, {"p95", s.latency_p95}, {"p99", s.latency_p99}}},
        {"frac_terminated", s.frac_terminated},
    };
    if (s.frac_success_at_or_before_good_window) {
        j["frac_success_at_or_before_good_window"] = *s.frac_success_at_or_before_good_window;
    } else {
        j["frac_success_at_or_before_good_window"] = nullptr;
    }
    return j;
}

}  // namespace wakeup

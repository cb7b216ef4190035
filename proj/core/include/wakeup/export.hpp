#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "wakeup/engine.hpp"

namespace wakeup {

inline constexpr std::string_view kRunCsvHeader =
    "trial,seed,latency,collisions,collision_cost,termination,success_slot,winner_batch";

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in double quotes with inner quotes doubled.
std::string csv_field(std::string_view raw);

/// One row per run under kRunCsvHeader. A nonempty `echo` is written first as
/// a "# ..." comment line so every file records the command that made it.
/// winner_batch is empty for runs without a success.
void write_run_csv(std::ostream& out, std::span<const RunSummary> runs, std::string_view echo = {});

/// Line-delimited JSON, one {"t","con","outcome"} object per slot. Requires
/// a run recorded with traces. A nonempty `echo` becomes a leading
/// {"config": echo} line.
void write_trace_ndjson(std::ostream& out, const RunRecord& run, std::string_view echo = {});

nlohmann::json to_json(const EnsembleStats& stats);

}  // namespace wakeup

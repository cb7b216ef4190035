#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wakeup/adversary.hpp"
#include "wakeup/engine.hpp"
#include "wakeup/protocols.hpp"

namespace wakeup::cli {

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Simulate, Sweep, Verify };
enum class Suite { Lemmas, Traces };

std::string to_string(Command c);
std::string to_string(Suite s);

ProtocolKind parse_protocol(const std::string& name);
ClockSetting parse_setting(const std::string& name);
SimulationPath parse_path(const std::string& name);

/// Everything a run depends on. Output paths are part of the config so the
/// echoed header fully reproduces the invocation.
struct ExperimentConfig {
    Command command = Command::Simulate;

    ProtocolKind protocol = ProtocolKind::AimHigh;
    ClockSetting setting = ClockSetting::Static;
    std::uint64_t n = 64;
    std::int64_t cost = 16;
    double epsilon = 0.4;
    std::int64_t d = 8;
    double p = 0.5;
    double kappa = 2.0;

    /// A schedule kind name, or empty when schedule_file is used.
    std::string schedule = "all_at_once";
    std::map<std::string, double> schedule_params;
    std::string schedule_file;

    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::uint64_t slot_cap = 100'000'000;
    bool batched = false;

    std::string out;
    std::string trace_out;
    std::string report;

    std::string sweep_param;
    std::vector<double> sweep_values;

    Suite suite = Suite::Lemmas;
    /// Hidden: name of a closed form to corrupt in `verify lemmas`.
    std::string inject_fault;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& doc);
    /// Argument vector (without the program name) that parses back to *this.
    std::vector<std::string> to_args() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Builds the protocol configuration; throws ConfigError naming the field.
ProtocolConfig protocol_config(const ExperimentConfig& cfg);

/// Schedule from the file or kind. Missing kind parameters fall back to
/// values derived from the experiment: C, epsilon and d from the protocol
/// flags; gamma from the gap threshold; interval for burst_then_drip from
/// gamma - 1.
InjectionSchedule build_schedule(const ExperimentConfig& cfg);

/// Sets the named parameter (n, C, epsilon, d, p, kappa) to `value`.
void apply_sweep_value(ExperimentConfig& cfg, const std::string& param, double value);

}  // namespace wakeup::cli

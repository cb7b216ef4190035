#include "wakeup/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "wakeup/error.hpp"

namespace wakeup::cli {

std::string to_string(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::Sweep: return "sweep";
        case Command::Verify: return "verify";
    }
    return "simulate";
}

std::string to_string(Suite s) { return s == Suite::Lemmas ? "lemmas" : "traces"; }

namespace {

Command parse_command(const std::string& name) {
    for (auto c : {Command::Simulate, Command::Sweep, Command::Verify}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("command", "unknown command '" + name + "'");
}

Suite parse_suite(const std::string& name) {
    if (name == "lemmas") return Suite::Lemmas;
    if (name == "traces") return Suite::Traces;
    throw ConfigError("suite", "suite must be 'lemmas' or 'traces' (got '" + name + "')");
}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

ProtocolKind parse_protocol(const std::string& name) {
    for (auto k : {ProtocolKind::AimHigh, ProtocolKind::IteratedAimHigh,
                   ProtocolKind::BackoffPerSlot, ProtocolKind::ConstantProb}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("protocol", "unknown protocol '" + name +
                                      "' (aim-high, iterated-aim-high, backoff, constant)");
}

ClockSetting parse_setting(const std::string& name) {
    if (name == "static") return ClockSetting::Static;
    if (name == "dynamic") return ClockSetting::Dynamic;
    throw ConfigError("setting", "setting must be 'static' or 'dynamic' (got '" + name + "')");
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json sweep_list = nlohmann::json::array();
    for (double v : sweep_values) sweep_list.push_back(v);
    return {
        {"command", to_string(command)},
        {"protocol", std::string(wakeup::to_string(protocol))},
        {"setting", std::string(wakeup::to_string(setting))},
        {"n", n},
        {"C", cost},
        {"epsilon", epsilon},
        {"d", d},
        {"p", p},
        {"kappa", kappa},
        {"schedule", schedule},
        {"schedule_params", schedule_params},
        {"schedule_file", schedule_file},
        {"trials", trials},
        {"seed", seed},
        {"slot_cap", slot_cap},
        {"batched", batched},
        {"out", out},
        {"trace_out", trace_out},
        {"report", report},
        {"sweep_param", sweep_param},
        {"sweep_values", sweep_list},
        {"suite", to_string(suite)},
        {"inject_fault", inject_fault},
    };
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "config must be a JSON object");
    ExperimentConfig c;
    try {
        c.command = parse_command(doc.value("command", to_string(c.command)));
        c.protocol = parse_protocol(doc.value("protocol", std::string(wakeup::to_string(c.protocol))));
        c.setting = parse_setting(doc.value("setting", std::string(wakeup::to_string(c.setting))));
        c.n = doc.value("n", c.n);
        c.cost = doc.value("C", c.cost);
        c.epsilon = doc.value("epsilon", c.epsilon);
        c.d = doc.value("d", c.d);
        c.p = doc.value("p", c.p);
        c.kappa = doc.value("kappa", c.kappa);
        c.schedule = doc.value("schedule", c.schedule);
        c.schedule_params = doc.value("schedule_params", c.schedule_params);
        c.schedule_file = doc.value("schedule_file", c.schedule_file);
        c.trials = doc.value("trials", c.trials);
        c.seed = doc.value("seed", c.seed);
        c.slot_cap = doc.value("slot_cap", c.slot_cap);
        c.batched = doc.value("batched", c.batched);
        c.out = doc.value("out", c.out);
        c.trace_out = doc.value("trace_out", c.trace_out);
        c.report = doc.value("report", c.report);
        c.sweep_param = doc.value("sweep_param", c.sweep_param);
        c.sweep_values = doc.value("sweep_values", c.sweep_values);
        c.suite = parse_suite(doc.value("suite", to_string(c.suite)));
        c.inject_fault = doc.value("inject_fault", c.inject_fault);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("malformed config: ") + e.what());
    }
    return c;
}

std::vector<std::string> ExperimentConfig::to_args() const {
    std::vector<std::string> a{to_string(command)};
    if (command == Command::Verify) a.push_back(to_string(suite));
    auto flag = [&](const std::string& name, const std::string& value) {
        a.push_back("--" + name);
        a.push_back(value);
    };
    flag("protocol", std::string(wakeup::to_string(protocol)));
    flag("setting", std::string(wakeup::to_string(setting)));
    flag("n", std::to_string(n));
    flag("C", std::to_string(cost));
    flag("epsilon", format_real(epsilon));
    flag("d", std::to_string(d));
    flag("p", format_real(p));
    flag("kappa", format_real(kappa));
    if (!schedule_file.empty()) flag("schedule-file", schedule_file);
    if (!schedule.empty()) flag("schedule", schedule);
    for (const auto& [k, v] : schedule_params) flag("schedule-param", k + "=" + format_real(v));
    flag("trials", std::to_string(trials));
    flag("seed", std::to_string(seed));
    flag("slot-cap", std::to_string(slot_cap));
    if (batched) a.push_back("--batched");
    if (!out.empty()) flag("out", out);
    if (!trace_out.empty()) flag("trace-out", trace_out);
    if (!report.empty()) flag("report", report);
    if (!sweep_param.empty()) flag("sweep-param", sweep_param);
    if (!sweep_values.empty()) {
        std::string joined;
        for (double v : sweep_values) joined += (joined.empty() ? "" : ",") + format_real(v);
        flag("sweep-values", joined);
    }
    if (!inject_fault.empty()) flag("inject-fault", inject_fault);
    return a;
}

ProtocolConfig protocol_config(const ExperimentConfig& cfg) {
    ProtocolConfig::Params p;
    p.cost = cfg.cost;
    p.epsilon = cfg.epsilon;
    p.d = cfg.d;
    p.setting = cfg.setting;
    p.kind = cfg.protocol;
    p.constant_p = cfg.p;
    return ProtocolConfig(p);
}

InjectionSchedule build_schedule(const ExperimentConfig& cfg) {
    if (!cfg.schedule_file.empty()) {
        std::ifstream in(cfg.schedule_file);
        if (!in) throw IoError("cannot open schedule file '" + cfg.schedule_file + "'");
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("schedule-file", "schedule file '" + cfg.schedule_file +
                                                   "' is not valid JSON: " + e.what());
        }
        return InjectionSchedule::from_json(doc);
    }
    if (cfg.n < 1) throw ConfigError("n", "n must be at least 1");
    const ScheduleKind kind = parse_schedule_kind(cfg.schedule);
    auto params = cfg.schedule_params;
    auto fallback = [&](const std::string& key, double value) { params.try_emplace(key, value); };
    switch (kind) {
        case ScheduleKind::SpikeBeforeGoodContention:
            fallback("C", static_cast<double>(cfg.cost));
            fallback("epsilon", cfg.epsilon);
            fallback("d", static_cast<double>(cfg.d));
            break;
        case ScheduleKind::AntiGap:
            if (!params.contains("gamma")) {
                fallback("gamma", static_cast<double>(gap_threshold(cfg.n, cfg.epsilon, cfg.kappa)));
            }
            break;
        case ScheduleKind::BurstThenDrip:
            fallback("burst", static_cast<double>((cfg.n + 1) / 2));
            if (!params.contains("interval")) {
                const auto gamma = gap_threshold(cfg.n, cfg.epsilon, cfg.kappa);
                fallback("interval", static_cast<double>(std::max<std::uint64_t>(1, gamma - 1)));
            }
            break;
        default: break;
    }
    return make_schedule(kind, cfg.n, params);
}

void apply_sweep_value(ExperimentConfig& cfg, const std::string& param, double value) {
    auto integral = [&](const char* name) {
        if (!(value >= 0.0) || value != std::floor(value) ||
            value > static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
            throw ConfigError(name, std::string("sweep values for ") + name +
                                        " must be nonnegative integers");
        }
        return static_cast<std::int64_t>(value);
    };
    if (param == "n") {
        cfg.n = static_cast<std::uint64_t>(integral("n"));
    } else if (param == "C") {
        cfg.cost = integral("C");
    } else if (param == "d") {
        cfg.d = integral("d");
    } else if (param == "epsilon") {
        cfg.epsilon = value;
    } else if (param == "p") {
        cfg.p = value;
    } else if (param == "kappa") {
        cfg.kappa = value;
    } else {
        throw ConfigError("sweep-param",
                          "cannot sweep '" + param + "' (n, C, epsilon, d, p, kappa)");
    }
}

}  // namespace wakeup::cli

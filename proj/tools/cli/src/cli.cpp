#include "wakeup/cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wakeup/analytics.hpp"
#include "wakeup/error.hpp"
#include "wakeup/export.hpp"
#include "wakeup/rng.hpp"
#include "wakeup/verification.hpp"

namespace wakeup::cli {

namespace {

struct HelpRequested {
    std::string text;
};

// Raw flag values bound by CLI11, converted once parsing finishes.
struct RawFlags {
    std::string protocol = "aim-high";
    std::string setting = "static";
    std::string schedule;
    std::vector<std::string> schedule_params;
};

void add_common(CLI::App& app, ExperimentConfig& c, RawFlags& raw) {
    app.add_option("--protocol", raw.protocol, "aim-high | iterated-aim-high | backoff | constant");
    app.add_option("--setting", raw.setting, "static | dynamic");
    app.add_option("--n", c.n, "number of packets");
    app.add_option("--C", c.cost, "collision cost (>= 4)");
    app.add_option("--epsilon", c.epsilon, "initial window exponent, w0 = 2^(C^epsilon)");
    app.add_option("--d", c.d, "sample-size constant");
    app.add_option("--p", c.p, "sending probability for the constant baseline");
    app.add_option("--kappa", c.kappa, "gap-threshold constant");
    app.add_option("--schedule", raw.schedule, "schedule kind, or a schedule JSON file");
    app.add_option("--schedule-param", raw.schedule_params, "schedule parameter key=value")
        ->take_all();
    app.add_option("--schedule-file", c.schedule_file, "schedule JSON file");
    app.add_option("--trials", c.trials, "number of independent trials");
    app.add_option("--seed", c.seed, "master seed");
    app.add_option("--slot-cap", c.slot_cap, "slot cap per run");
    app.add_flag("--batched", c.batched, "one binomial draw per batch per slot");
    app.add_option("--out", c.out, "per-run (simulate) or per-point (sweep) CSV");
    app.add_option("--trace-out", c.trace_out, "NDJSON slot trace of trial 0");
    app.add_option("--report", c.report, "JSON report file (default: standard output)");
}

std::string field_of_option(const std::string& name) {
    std::string f = name;
    while (!f.empty() && f.front() == '-') f.erase(f.begin());
    return f.empty() ? "arguments" : f;
}

}  // namespace

ExperimentConfig parse_args(const std::vector<std::string>& args) {
    ExperimentConfig c;
    RawFlags raw;
    std::string suite = "lemmas";

    CLI::App app{"Slot-synchronous wakeup simulator with collision cost", "wakeup_sim"};
    app.require_subcommand(1);
    auto* simulate = app.add_subcommand("simulate", "run an ensemble of trials");
    auto* sweep = app.add_subcommand("sweep", "run ensembles across one parameter and fit slopes");
    auto* verify = app.add_subcommand("verify", "run the closed-form or trace verification suite");
    for (auto* sub : {simulate, sweep, verify}) add_common(*sub, c, raw);
    sweep->add_option("--sweep-param", c.sweep_param, "n | C | epsilon | d | p | kappa")->required();
    sweep->add_option("--sweep-values", c.sweep_values, "comma-separated values")
        ->delimiter(',')
        ->required();
    verify->add_option("suite", suite, "lemmas | traces");
    verify->add_option("--inject-fault", c.inject_fault)->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (auto* sub : {simulate, sweep, verify}) {
            if (sub->parsed()) target = sub;
        }
        throw HelpRequested{target->help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        std::string field = "arguments";
        const std::string what = e.what();
        const auto dash = what.find("--");
        if (dash != std::string::npos) {
            const auto end = what.find_first_of(" :,", dash);
            field = field_of_option(what.substr(dash, end == std::string::npos ? end : end - dash));
        }
        throw ConfigError(field, what);
    }

    if (simulate->parsed()) c.command = Command::Simulate;
    if (sweep->parsed()) c.command = Command::Sweep;
    if (verify->parsed()) {
        c.command = Command::Verify;
        if (suite == "lemmas") {
            c.suite = Suite::Lemmas;
        } else if (suite == "traces") {
            c.suite = Suite::Traces;
        } else {
            throw ConfigError("suite", "suite must be 'lemmas' or 'traces' (got '" + suite + "')");
        }
    }

    c.protocol = parse_protocol(raw.protocol);
    c.setting = parse_setting(raw.setting);

    // --schedule takes a kind name or, failing that, a schedule file path.
    const auto* sub = c.command == Command::Simulate ? simulate
                      : c.command == Command::Sweep  ? sweep
                                                     : verify;
    if (sub->count("--schedule") > 0) {
        try {
            parse_schedule_kind(raw.schedule);
            c.schedule = raw.schedule;
        } catch (const ConfigError&) {
            if (!c.schedule_file.empty() && c.schedule_file != raw.schedule) {
                throw ConfigError("schedule", "'" + raw.schedule +
                                                  "' is not a schedule kind and --schedule-file "
                                                  "is already given");
            }
            c.schedule_file = raw.schedule;
            c.schedule.clear();
        }
    } else if (!c.schedule_file.empty()) {
        c.schedule.clear();
    }
    for (const auto& kv : raw.schedule_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("schedule-param", "expected key=value (got '" + kv + "')");
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) {
            throw ConfigError("schedule-param", "value for '" + key + "' is not a number");
        }
        c.schedule_params[key] = v;
    }
    return c;
}

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

void finish_output(std::ofstream& f, const std::string& path) {
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

// Writes `doc` to cfg.report, or `out` when no report path is set.
void emit_report(const nlohmann::json& doc, const ExperimentConfig& cfg, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (cfg.report.empty()) {
        out << text;
        return;
    }
    auto f = open_output(cfg.report);
    f << text;
    finish_output(f, cfg.report);
}

std::string echo_line(const ExperimentConfig& cfg) { return cfg.to_json().dump(); }

EnsembleOptions ensemble_options(const ExperimentConfig& cfg) {
    EnsembleOptions eo;
    eo.slot_cap = cfg.slot_cap;
    eo.threads = threads_from_environment();
    eo.path = cfg.batched ? SimulationPath::Batched : SimulationPath::PerPacket;
    return eo;
}

RunRecord rerun_with_trace(const ProtocolConfig& pc, const InjectionSchedule& schedule,
                           const ExperimentConfig& cfg) {
    SimulationOptions so;
    so.slot_cap = cfg.slot_cap;
    so.record_traces = true;
    const std::uint64_t seed = derive_trial_seed(cfg.seed, 0);
    return cfg.batched ? simulate_batched(pc, schedule, seed, so) : simulate(pc, schedule, seed, so);
}

std::optional<double> safe_slope(const std::vector<std::pair<double, double>>& pts) {
    for (const auto& [x, y] : pts) {
        if (!(x > 0.0 && y > 0.0)) return std::nullopt;
    }
    return analytics::fit_power_law(pts);
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
    const ProtocolConfig pc = protocol_config(cfg);
    const InjectionSchedule schedule = build_schedule(cfg);
    const EnsembleResult res = run_ensemble(pc, schedule, cfg.trials, cfg.seed, ensemble_options(cfg));
    const std::string echo = echo_line(cfg);

    if (!cfg.out.empty()) {
        auto f = open_output(cfg.out);
        write_run_csv(f, res.runs, echo);
        finish_output(f, cfg.out);
    }
    if (!cfg.trace_out.empty()) {
        const RunRecord run = rerun_with_trace(pc, schedule, cfg);
        auto f = open_output(cfg.trace_out);
        write_trace_ndjson(f, run, echo);
        finish_output(f, cfg.trace_out);
    }
    out << to_json(res.stats).dump(2) << "\n";
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.sweep_param.empty()) throw ConfigError("sweep-param", "a sweep needs --sweep-param");
    if (cfg.sweep_values.size() < 2) {
        throw ConfigError("sweep-values", "a sweep needs at least two values to fit a slope");
    }

    nlohmann::json points = nlohmann::json::array();
    std::vector<std::pair<double, double>> latency_pts, cost_pts;
    std::ostringstream csv;
    csv << "# " << echo_line(cfg) << "\n";
    csv << "value,mean_latency,mean_collision_cost,mean_collisions,latency_p50,latency_p95,"
           "latency_p99,frac_terminated\n";
    for (const double value : cfg.sweep_values) {
        ExperimentConfig point = cfg;
        apply_sweep_value(point, cfg.sweep_param, value);
        const ProtocolConfig pc = protocol_config(point);
        const InjectionSchedule schedule = build_schedule(point);
        const auto res = run_ensemble(pc, schedule, point.trials, point.seed, ensemble_options(point));
        const auto& s = res.stats;
        csv << nlohmann::json(value).dump() << ',' << nlohmann::json(s.mean_latency).dump() << ','
            << nlohmann::json(s.mean_collision_cost).dump() << ','
            << nlohmann::json(s.mean_collisions).dump() << ',' << nlohmann::json(s.latency_p50).dump()
            << ',' << nlohmann::json(s.latency_p95).dump() << ','
            << nlohmann::json(s.latency_p99).dump() << ','
            << nlohmann::json(s.frac_terminated).dump() << "\n";
        points.push_back({{"value", value}, {"stats", to_json(s)}});
        latency_pts.emplace_back(value, s.mean_latency);
        cost_pts.emplace_back(value, s.mean_collision_cost);
    }

    if (!cfg.out.empty()) {
        auto f = open_output(cfg.out);
        f << csv.str();
        finish_output(f, cfg.out);
    }
    nlohmann::json report{
        {"config", cfg.to_json()},
        {"parameter", cfg.sweep_param},
        {"points", points},
        {"slopes",
         {{"latency", optional_json(safe_slope(latency_pts))},
          {"collision_cost", optional_json(safe_slope(cost_pts))}}},
    };
    emit_report(report, cfg, out);
    return kExitOk;
}

namespace {

verification::Bounds faulty_bounds(const std::string& fault) {
    auto b = verification::Bounds::defaults();
    if (fault.empty()) return b;
    if (fault == "collision_upper_bound") {
        b.collision_upper = [](std::uint64_t m, double p) {
            return 0.1 * analytics::collision_upper_bound(m, p);
        };
    } else if (fault == "collision_lower_bound") {
        b.collision_lower = [](double con) { return 2.0 * analytics::collision_lower_bound(con); };
    } else if (fault == "success_lower_bound") {
        b.success_lower = [](double con) { return 2.0 * analytics::success_lower_bound(con); };
    } else if (fault == "high_contention_floor") {
        b.high_contention_floor = [] { return 0.9; };
    } else if (fault == "dynamic_collision_ceiling") {
        b.dynamic_ceiling = [](std::int64_t cost) {
            return analytics::dynamic_collision_ceiling(cost) / 1e6;
        };
    } else {
        throw ConfigError("inject-fault", "unknown fault '" + fault + "'");
    }
    return b;
}

nlohmann::json regime_json(const ExperimentConfig& cfg, const InjectionSchedule& schedule) {
    const TStar ts = classify_t_star(schedule, cfg.cost, cfg.epsilon);
    nlohmann::json j{{"t_star", ts.slot ? nlohmann::json(*ts.slot) : nlohmann::json("infinity")},
                     {"threshold", ts.threshold}};
    if (schedule.total() >= 4) {
        const std::uint64_t gamma = gap_threshold(schedule.total(), cfg.epsilon, cfg.kappa);
        const auto gaps = find_gaps(schedule, gamma, schedule.last_injection_slot() + gamma);
        nlohmann::json list = nlohmann::json::array();
        for (const auto& g : gaps) list.push_back({{"start", g.start}, {"length", g.length}});
        j["gamma"] = gamma;
        j["gaps"] = list;
    }
    return j;
}

}  // namespace

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    verification::Report report;
    nlohmann::json doc;
    if (cfg.suite == Suite::Lemmas) {
        report = verification::run_lemma_suite(faulty_bounds(cfg.inject_fault));
        doc = report.to_json();
        doc["suite"] = "lemmas";
    } else {
        if (!cfg.inject_fault.empty()) {
            throw ConfigError("inject-fault", "faults apply to the lemmas suite only");
        }
        ExperimentConfig dyn = cfg;
        dyn.setting = ClockSetting::Dynamic;
        const ProtocolConfig pc = protocol_config(dyn);
        const InjectionSchedule schedule = build_schedule(dyn);
        verification::TraceSuiteOptions opts;
        opts.trials = dyn.trials;
        opts.master_seed = dyn.seed;
        opts.slot_cap = dyn.slot_cap;
        opts.path = dyn.batched ? SimulationPath::Batched : SimulationPath::PerPacket;
        report = verification::run_trace_suite(pc, schedule, opts);
        doc = report.to_json();
        doc["suite"] = "traces";
        doc["regime"] = regime_json(dyn, schedule);
        doc["config"] = dyn.to_json();
    }
    emit_report(doc, cfg, out);
    if (!report.passed()) {
        err << "verification failed:";
        for (const auto& name : report.failing()) err << ' ' << name;
        err << "\n";
        return kExitVerification;
    }
    return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig cfg = parse_args(args);
        switch (cfg.command) {
            case Command::Simulate: return cmd_simulate(cfg, out, err);
            case Command::Sweep: return cmd_sweep(cfg, out, err);
            case Command::Verify: return cmd_verify(cfg, out, err);
        }
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.field() << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace wakeup::cli

#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "wakeup/export.hpp"

using namespace wakeup;

TEST(Csv, FieldQuoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RunRows) {
    RunSummary a;
    a.trial = 0;
    a.seed = 11;
    a.latency = 40;
    a.collisions = 2;
    a.collision_cost = 32;
    a.termination = Termination::Success;
    a.success_slot = 40;
    a.winner_batch = 1;
    RunSummary b;
    b.trial = 1;
    b.seed = 12;
    b.latency = 100;
    b.termination = Termination::SlotCapExceeded;
    const std::vector<RunSummary> runs{a, b};
    std::ostringstream out;
    write_run_csv(out, runs, "{\"C\":16,\"n\":\"a,b\"}");
    const std::string want =
        "# {\"C\":16,\"n\":\"a,b\"}\n"
        "trial,seed,latency,collisions,collision_cost,termination,success_slot,winner_batch\n"
        "0,11,40,2,32,success,40,1\n"
        "1,12,100,0,0,slot_cap_exceeded,0,\n";
    EXPECT_EQ(out.str(), want);
}

TEST(Ndjson, TraceLines) {
    RunRecord r;
    r.slots = 2;
    r.contention_trace = {0.5, 1.25};
    r.outcome_trace = {SlotKind::Collision, SlotKind::Success};
    std::ostringstream out;
    write_trace_ndjson(out, r, "{\"x\":1}");
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(nlohmann::json::parse(line)["config"], "{\"x\":1}");
    std::getline(in, line);
    const auto first = nlohmann::json::parse(line);
    EXPECT_EQ(first["t"], 1);
    EXPECT_EQ(first["con"], 0.5);
    EXPECT_EQ(first["outcome"], "collision");
    std::getline(in, line);
    EXPECT_EQ(nlohmann::json::parse(line)["outcome"], "success");
    EXPECT_FALSE(std::getline(in, line));
}

TEST(StatsJson, Keys) {
    EnsembleStats s;
    s.trials = 3;
    s.mean_latency = 2.5;
    s.frac_success_at_or_before_good_window = 1.0;
    const auto j = to_json(s);
    EXPECT_EQ(j["trials"], 3);
    EXPECT_EQ(j["mean_latency"], 2.5);
    EXPECT_TRUE(j.contains("latency_quantiles"));
    EXPECT_EQ(j["frac_success_at_or_before_good_window"], 1.0);
    EnsembleStats dyn;
    EXPECT_TRUE(to_json(dyn)["frac_success_at_or_before_good_window"].is_null());
}

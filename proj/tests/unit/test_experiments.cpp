#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gr1shield/experiments.hpp"

using namespace gr1shield;

namespace {

ExperimentConfig small(const std::string& env, Variant v, std::size_t steps) {
    ExperimentConfig cfg;
    cfg.env = env;
    cfg.variant = v;
    cfg.fixtures_dir = GR1SHIELD_FIXTURES_DIR;
    cfg.agent.total_steps = steps;
    cfg.agent.eval_episodes = 3;
    return cfg;
}

}  // namespace

TEST_CASE("variant names round-trip") {
    for (const std::string env : {"minepump", "seaquest"})
        for (Variant v : variants_for(env)) {
            CHECK(parse_variant(to_string(v)) == v);
            CHECK(valid_for(v, env));
            CHECK_FALSE(label(v).empty());
        }
    CHECK(label(Variant::Adaptive) == "Adaptive Shield");
    CHECK(variants_for("minepump").size() == 7);
    CHECK(variants_for("seaquest").size() == 5);
    CHECK_FALSE(valid_for(Variant::Naive, "minepump"));
    CHECK_FALSE(valid_for(Variant::Static1, "seaquest"));
    CHECK_THROWS(parse_variant("mystery"));
    CHECK(shield_spec_file(Variant::None, "minepump").empty());
    CHECK(shield_spec_file(Variant::Repaired, "seaquest") == "seaquest_repaired.gr1");
}

TEST_CASE("config validation rejects mismatched variants") {
    ExperimentConfig cfg = small("minepump", Variant::Naive, 10);
    CHECK_THROWS(cfg.validate());
    cfg.variant = Variant::Static1;
    CHECK_NOTHROW(cfg.validate());
    cfg.seeds.clear();
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("standard error over seeds") {
    Stat s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(summarize({7.0}).se == 0.0);
    CHECK(summarize({}).mean == 0.0);
}

TEST_CASE("zero training steps leave the table untouched") {
    ExperimentConfig cfg = small("minepump", Variant::StaticStar, 0);
    QTable q;
    RunMetrics m = run_seed(cfg, 1, &q);
    CHECK(m.train_episodes == 0);
    CHECK(m.curve_return.empty());
    for (std::size_t s = 0; s < q.states(); ++s)
        for (std::size_t a = 0; a < q.actions(); ++a) CHECK(q.at(s, a) == 0.0);
}

TEST_CASE("runs are reproducible per seed") {
    ExperimentConfig cfg = small("minepump", Variant::Adaptive, 4000);
    RunMetrics a = run_seed(cfg, 3), b = run_seed(cfg, 3);
    CHECK(a.train_reward == b.train_reward);
    CHECK(a.eval_reward == b.eval_reward);
    CHECK(a.eval_override == b.eval_override);
    CHECK(a.curve_return == b.curve_return);
    RunMetrics c = run_seed(cfg, 4);
    CHECK(c.curve_return != a.curve_return);
}

TEST_CASE("shielded training stays in the winning region") {
    ExperimentConfig cfg = small("minepump", Variant::StaticStar, 6000);
    RunMetrics m = run_seed(cfg, 5);
    CHECK(m.train_in_w == 1.0);
    // Deadlocks come from the deployment evaluation, where the pass-through applies.
    CHECK(m.deadlocks > 0);
    ExperimentConfig sq = small("seaquest", Variant::Static, 6000);
    RunMetrics s = run_seed(sq, 5);
    CHECK(s.train_in_w == 1.0);
    CHECK(s.train_success == 1.0);
}

TEST_CASE("adaptive minepump repairs once and then holds the ideal guarantees") {
    ExperimentConfig cfg = small("minepump", Variant::Adaptive, 20000);
    cfg.agent.eval_episodes = 10;
    cfg.record_trace = true;
    RunMetrics m = run_seed(cfg, 6);
    CHECK(m.repairs == 1);
    CHECK(m.repair_failures == 0);
    CHECK(m.eval_success == 1.0);
    CHECK(m.eval_in_w == 1.0);
    CHECK(m.final_spec.find("highwater && !methane -> X(pump)") != std::string::npos);
    CHECK(m.final_spec.find("assumption2") == std::string::npos);
    CHECK_FALSE(m.eval_trace.empty());
}

TEST_CASE("evaluation from a saved table matches the run") {
    ExperimentConfig cfg = small("minepump", Variant::StaticStar, 5000);
    QTable q;
    RunMetrics trained = run_seed(cfg, 7, &q);
    std::stringstream ss;
    q.save(ss);
    RunMetrics again = eval_seed(cfg, 7, QTable::load(ss));
    CHECK(again.eval_reward == trained.eval_reward);
    CHECK(again.eval_success == trained.eval_success);
}

TEST_CASE("parallel runs follow seed order") {
    ExperimentConfig cfg = small("minepump", Variant::None, 2000);
    cfg.seeds = {11, 12, 13};
    auto runs = run_experiment(cfg, 2);
    REQUIRE(runs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(runs[i].seed == cfg.seeds[i]);
        CHECK(runs[i].eval_reward == run_seed(cfg, cfg.seeds[i]).eval_reward);
    }
    MetricsRow row = aggregate(cfg, runs);
    CHECK(row.seeds == 3);
    CHECK(row.label == "Unshielded");
    CHECK(row.guarantee_names == std::vector<std::string>{"guarantee1", "guarantee2"});
}

TEST_CASE("metrics CSV layout") {
    MetricsRow row;
    row.env = "minepump";
    row.variant = Variant::Adaptive;
    row.label = label(row.variant);
    row.seeds = 2;
    row.eval_success = {1.0, 0.0};
    row.guarantee_names = {"guarantee1", "guarantee2"};
    row.compliance = {{1.0, 0.0}, {0.5, 0.25}};
    std::ostringstream out;
    write_metrics_header(out, row.guarantee_names);
    write_metrics_row(out, row);
    std::string text = out.str();
    std::string header = text.substr(0, text.find('\n'));
    std::string line = text.substr(text.find('\n') + 1);
    auto fields = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
    CHECK(fields(header) == fields(line.substr(0, line.size() - 1)));
    CHECK(header.rfind("env,variant,label,seeds,train_reward_mean", 0) == 0);
    CHECK(line.find("minepump,adaptive,Adaptive Shield,2,") == 0);
    CHECK(line.find("0.250000") != std::string::npos);
    CHECK(format_table({row}).find("Adaptive Shield") != std::string::npos);
}

TEST_CASE("pattern check uses the published thresholds") {
    auto row = [](Variant v, double train, double eval, double over = 0.0, double in_w = 1.0) {
        MetricsRow r;
        r.variant = v;
        r.train_success = {train, 0.0};
        r.eval_success = {eval, 0.0};
        r.eval_override = {over, 0.0};
        r.eval_in_w = {in_w, 0.0};
        return r;
    };
    std::vector<MetricsRow> good{row(Variant::None, 0.0, 0.0),       row(Variant::Naive, 1.0, 0.04),
                                 row(Variant::Static, 1.0, 0.0),     row(Variant::Repaired, 1.0, 1.0),
                                 row(Variant::Adaptive, 1.0, 1.0)};
    auto cells = check_pattern("seaquest", good);
    CHECK(cells.size() == 11);
    for (const auto& c : cells) CHECK(c.pass);
    good[1].eval_success.mean = 0.06;
    good[4].eval_in_w.mean = 0.99;
    int failed = 0;
    for (const auto& c : check_pattern("seaquest", good)) failed += !c.pass;
    CHECK(failed == 2);

    std::vector<MetricsRow> mp{row(Variant::Symbolic1, 1, 0), row(Variant::Symbolic2, 1, 1),
                               row(Variant::None, 0.2, 0.1),  row(Variant::Static1, 0, 0),
                               row(Variant::Static2, 0, 0),   row(Variant::StaticStar, 0.9, 0.3),
                               row(Variant::Adaptive, 1, 1, 0.2)};
    auto mc = check_pattern("minepump", mp);
    CHECK(mc.size() == 15);
    for (const auto& c : mc) CHECK(c.pass);
    mp[6].eval_override.mean = 0.0;
    mp.pop_back();
    int missing = 0;
    for (const auto& c : check_pattern("minepump", mp)) missing += !c.pass;
    CHECK(missing == 3);
}

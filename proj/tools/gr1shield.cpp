#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gr1shield/experiments.hpp"
#include "gr1shield/monitor.hpp"
#include "gr1shield/repair.hpp"
#include "gr1shield/shield.hpp"

#ifndef GR1SHIELD_FIXTURES_DIR
#define GR1SHIELD_FIXTURES_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace gr1shield;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 2;
constexpr int kRepairFailure = 3;
constexpr int kSpecError = 4;

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

std::uint64_t state_count(const Spec& spec) {
    std::uint64_t n = 1;
    for (const auto& v : spec.vars) n *= static_cast<std::uint64_t>(v.count());
    return n;
}

/// "5" means seeds 0..4; "3,7,11" lists them explicitly.
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    if (s.find(',') == std::string::npos) {
        const std::uint64_t n = std::stoull(s);
        for (std::uint64_t i = 0; i < n; ++i) out.push_back(i);
        return out;
    }
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

int cmd_synth(const std::string& spec_path, const fs::path& out_dir) {
    const Spec spec = load_spec(spec_path);
    const Controller c = Controller::solve(spec);
    std::cout << "realizable: " << (c.realizable() ? "yes" : "no") << '\n'
              << "winning valuations: " << c.projected_region_size() << " of " << state_count(spec) << '\n'
              << "spec hash: " << c.spec_hash() << '\n';
    if (c.realizable()) {
        const fs::path p = out_dir / "controller.json";
        write_file(p, c.serialize());
        std::cout << "controller: " << p.string() << '\n';
        return kOk;
    }
    std::string dump = "no counter-strategy within the node budget\n";
    try {
        if (auto cs = counter_strategy(c.game())) dump = cs->describe(c.game());
    } catch (const GameError& e) {
        dump = std::string("counter-strategy unavailable: ") + e.what() + '\n';
    }
    const fs::path p = out_dir / "counter_strategy.txt";
    write_file(p, dump);
    std::cout << "counter-strategy: " << p.string() << '\n';
    return kSpecError;
}

int cmd_check(const std::string& spec_path, const std::string& trace_path) {
    const Spec spec = load_spec(spec_path);
    const auto diags = check_wellformed(spec);
    for (const auto& d : diags)
        std::cout << spec_path << ':' << d.line << ": " << (d.unit.empty() ? "" : d.unit + ": ") << d.message << '\n';
    if (!diags.empty()) return kSpecError;
    std::cout << "spec ok: " << spec.vars.size() << " variables, " << spec.units.size() << " units\n";
    if (!trace_path.empty()) {
        const auto values = trace_values(load_trace(trace_path, spec));
        std::cout << "trace: " << values.size() << " steps, " << to_string(check_step(values, spec)) << '\n';
    }
    return kOk;
}

int cmd_monitor(const std::string& spec_path, const std::string& trace_path, std::size_t window) {
    const Spec spec = load_spec(spec_path);
    const auto values = trace_values(load_trace(trace_path, spec));
    Monitor mon(spec);
    for (const auto& v : values) mon.push(v);
    std::cout << "steps: " << values.size() << '\n' << "verdict: " << to_string(mon.verdict()) << '\n';
    for (const auto& w : mon.staleness(window)) std::cout << "warning: " << to_string(w) << '\n';
    return kOk;
}

int cmd_repair(const std::string& spec_path, const std::string& trace_path, const fs::path& out_dir) {
    const Spec spec = load_spec(spec_path);
    const auto values = trace_values(load_trace(trace_path, spec));
    RepairOutcome r;
    try {
        r = spec_repair(spec, values);
    } catch (const RepairError& e) {
        std::cerr << "repair failed: " << e.what() << '\n';
        return kRepairFailure;
    }
    write_file(out_dir / "spec_prime.gr1", print_spec(r.spec_prime));
    write_file(out_dir / "controller.json", r.controller->serialize());
    write_file(out_dir / "repair.diff", r.diff);
    write_file(out_dir / "edits.jsonl", edits_json(r.edits()));
    std::ostringstream rep;
    const SoundnessReport& s = r.soundness;
    rep << "trace_admitted: " << s.trace_admitted << '\n'
        << "realizable: " << s.realizable << '\n'
        << "assumptions_weakened: " << s.assumptions_weakened << '\n'
        << "guarantees_weakened: " << s.guarantees_weakened << '\n'
        << "endpoint_in_region: " << s.endpoint_in_region << '\n';
    for (const auto& n : s.notes) rep << "note: " << n << '\n';
    write_file(out_dir / "soundness.txt", rep.str());
    if (r.identity()) std::cout << "trace consistent with the spec; no edits\n";
    for (const auto& e : r.edits())
        std::cout << to_string(e.kind) << ' ' << e.unit << ": "
                  << (e.new_formula ? print_formula(e.new_formula) : std::string("(deleted)")) << '\n';
    std::cout << r.diff;
    return kOk;
}

struct RunOptions {
    std::string env = "minepump";
    std::string shield = "none";
    std::string seeds;
    std::size_t steps = 0;
    std::size_t eval_episodes = 20;
    std::string mode = "deployment";
    std::string spec;
    std::string fixtures = GR1SHIELD_FIXTURES_DIR;
    std::string out = "out";
    std::string in;
    bool trace = false;
};

std::size_t default_steps(const std::string& env) { return env == "seaquest" ? 500000 : 200000; }
std::string default_seeds(const std::string& env) { return env == "seaquest" ? "5" : "10"; }

ExperimentConfig make_config(const RunOptions& o, Variant v) {
    ExperimentConfig cfg;
    cfg.env = o.env;
    cfg.variant = v;
    cfg.seeds = parse_seeds(o.seeds.empty() ? default_seeds(o.env) : o.seeds);
    cfg.agent.total_steps = o.steps ? o.steps : default_steps(o.env);
    cfg.agent.eval_episodes = o.eval_episodes;
    cfg.fixtures_dir = o.fixtures;
    cfg.spec_path = o.spec;
    cfg.eval_mode = parse_mode(o.mode);
    cfg.record_trace = o.trace;
    cfg.validate();
    return cfg;
}

void write_outputs(const fs::path& dir, const std::string& metrics_name, const ExperimentConfig& cfg,
                   const std::vector<RunMetrics>& runs) {
    const MetricsRow row = aggregate(cfg, runs);
    std::ostringstream m;
    write_metrics_header(m, row.guarantee_names);
    write_metrics_row(m, row);
    write_file(dir / metrics_name, m.str());
    for (const auto& r : runs) {
        if (r.eval_trace.empty()) continue;
        std::ostringstream t;
        write_trace(t, r.eval_trace, parse_spec(r.trace_spec));
        write_file(dir / ("trace_seed" + std::to_string(r.seed) + ".jsonl"), t.str());
    }
    std::cout << format_table({row});
}

int cmd_train(const RunOptions& o) {
    const ExperimentConfig cfg = make_config(o, parse_variant(o.shield));
    std::vector<QTable> tables;
    const auto runs = run_experiment(cfg, 0, &tables);
    const fs::path dir(o.out);
    std::ostringstream curves;
    curves << "variant,seed,episode,return,success\n";
    write_curves(curves, to_string(cfg.variant), runs);
    write_file(dir / "curves.csv", curves.str());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::ostringstream q;
        tables[i].save(q);
        write_file(dir / ("qtable_seed" + std::to_string(runs[i].seed) + ".txt"), q.str());
    }
    write_outputs(dir, "metrics.csv", cfg, runs);
    return kOk;
}

int cmd_eval(const RunOptions& o) {
    const ExperimentConfig cfg = make_config(o, parse_variant(o.shield));
    const fs::path in(o.in.empty() ? o.out : o.in);
    std::vector<RunMetrics> runs;
    for (std::uint64_t seed : cfg.seeds) {
        std::ifstream f(in / ("qtable_seed" + std::to_string(seed) + ".txt"));
        if (!f) throw std::runtime_error("missing q-table for seed " + std::to_string(seed) + " in " + in.string());
        runs.push_back(eval_seed(cfg, seed, QTable::load(f)));
    }
    write_outputs(fs::path(o.out), "eval_metrics.csv", cfg, runs);
    return kOk;
}

int cmd_reproduce(const RunOptions& o) {
    const fs::path dir(o.out);
    std::vector<MetricsRow> rows;
    std::ostringstream curves;
    curves << "variant,seed,episode,return,success\n";
    for (Variant v : variants_for(o.env)) {
        const ExperimentConfig cfg = make_config(o, v);
        const auto runs = run_experiment(cfg);
        rows.push_back(aggregate(cfg, runs));
        write_curves(curves, to_string(v), runs);
        std::cerr << label(v) << " done\n";
    }
    std::ostringstream m;
    write_metrics_header(m, rows.front().guarantee_names);
    for (const auto& r : rows) write_metrics_row(m, r);
    write_file(dir / "metrics.csv", m.str());
    write_file(dir / "curves.csv", curves.str());
    const std::string table = format_table(rows);
    write_file(dir / "table.txt", table);
    std::cout << table << '\n';

    std::ostringstream pat;
    pat << "row,column,expected,actual,pass\n";
    bool all = true;
    for (const auto& c : check_pattern(o.env, rows)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", c.actual);
        pat << c.row << ',' << c.column << ',' << c.expected << ',' << buf << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.row << " / " << c.column << ": expected " << c.expected
                  << ", got " << buf << '\n';
        all = all && c.pass;
    }
    write_file(dir / "pattern.csv", pat.str());
    return all ? kOk : kMismatch;
}

void add_run_options(CLI::App* sub, RunOptions& o, bool with_shield) {
    sub->add_option("--env", o.env, "minepump or seaquest")->check(CLI::IsMember({"minepump", "seaquest"}));
    if (with_shield) sub->add_option("--shield", o.shield, "shield variant or symbolic controller");
    sub->add_option("--seeds", o.seeds, "seed count, or a comma-separated list");
    sub->add_option("--steps", o.steps, "training steps per seed");
    sub->add_option("--eval-episodes", o.eval_episodes, "evaluation episodes per seed");
    sub->add_option("--mode", o.mode, "evaluation environment mode")->check(CLI::IsMember({"training", "deployment"}));
    sub->add_option("--spec", o.spec, "shield spec overriding the variant's default");
    sub->add_option("--fixtures", o.fixtures, "directory with the bundled specs");
    sub->add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GR(1) shields for reinforcement learning agents"};
    app.require_subcommand(1);

    std::string spec, trace, out = ".";
    std::size_t window = 500;

    auto* synth = app.add_subcommand("synth", "synthesize the shield of a spec");
    synth->add_option("--spec", spec, "spec file")->required();
    synth->add_option("--out", out, "output directory");

    auto* check = app.add_subcommand("check", "check a spec for well-formedness, optionally against a trace");
    check->add_option("--spec", spec, "spec file")->required();
    check->add_option("--trace", trace, "trace in JSON lines");

    auto* monitor = app.add_subcommand("monitor", "replay a trace through the runtime monitor");
    monitor->add_option("--spec", spec, "spec file")->required();
    monitor->add_option("--trace", trace, "trace in JSON lines")->required();
    monitor->add_option("--window", window, "justice staleness window");

    auto* repair = app.add_subcommand("repair", "repair a spec against a violating trace");
    repair->add_option("--spec", spec, "spec file")->required();
    repair->add_option("--trace", trace, "trace in JSON lines")->required();
    repair->add_option("--out", out, "output directory");

    RunOptions run;
    auto* train = app.add_subcommand("train", "train and evaluate one shield variant");
    add_run_options(train, run, true);
    train->add_flag("--trace-out", run.trace, "write the first evaluation episode of each seed");

    auto* eval = app.add_subcommand("eval", "evaluate trained q-tables");
    add_run_options(eval, run, true);
    eval->add_option("--in", run.in, "directory with q-tables (defaults to --out)");
    eval->add_flag("--trace-out", run.trace, "write the first evaluation episode of each seed");

    auto* repro = app.add_subcommand("reproduce", "run every variant of a results table");
    add_run_options(repro, run, false);
    repro->add_option("--table", run.env, "minepump or seaquest")->check(CLI::IsMember({"minepump", "seaquest"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return cmd_synth(spec, out);
        if (*check) return cmd_check(spec, trace);
        if (*monitor) return cmd_monitor(spec, trace, window);
        if (*repair) return cmd_repair(spec, trace, out);
        if (*train) return cmd_train(run);
        if (*eval) return cmd_eval(run);
        if (*repro) return cmd_reproduce(run);
    } catch (const SpecError& e) {
        std::cerr << "spec error: " << e.what() << '\n';
        return kSpecError;
    } catch (const RepairError& e) {
        std::cerr << "repair failed: " << e.what() << '\n';
        return kRepairFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}

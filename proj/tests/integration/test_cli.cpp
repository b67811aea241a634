#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/scenarios.hpp"
#include "gr1shield/repair.hpp"
#include "gr1shield/shield.hpp"

namespace fs = std::filesystem;
using namespace gr1shield;

namespace {

const std::string kFixtures = GR1SHIELD_FIXTURES_DIR;

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(GR1SHIELD_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("gr1shield_cli_" + std::to_string(getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_values(const fs::path& p, const std::vector<Assignment>& values, const Spec& spec) {
    std::vector<TraceRecord> recs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        TraceRecord r;
        r.t = i;
        r.values = values[i];
        recs.push_back(r);
    }
    std::ofstream out(p);
    write_trace(out, recs, spec);
    return p;
}

/// Header fields followed by the fields of the first data row.
std::vector<std::string> csv_row(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream lines(text);
    std::string line;
    for (int i = 0; i < 2 && std::getline(lines, line); ++i) {
        std::stringstream fields(line);
        std::string f;
        while (std::getline(fields, f, ',')) out.push_back(f);
    }
    return out;
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

}  // namespace

TEST_CASE("synth on minepump reports six winning valuations") {
    const fs::path d = scratch("synth");
    const Run r = cli("synth --spec " + kFixtures + "/minepump.gr1 --out " + d.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "realizable: yes"));
    CHECK(contains(r.out, "winning valuations: 6 of 8"));
    REQUIRE(fs::exists(d / "controller.json"));
    const Controller c = Controller::deserialize(slurp(d / "controller.json"));
    CHECK(c.projected_region_size() == 6);
}

TEST_CASE("synth on an unrealizable spec writes a counter-strategy") {
    const fs::path d = scratch("liveness");
    const Run r = cli("synth --spec " + kFixtures + "/minepump_liveness.gr1 --out " + d.string());
    CHECK(r.code == 4);
    CHECK(contains(r.out, "realizable: no"));
    CHECK(fs::exists(d / "counter_strategy.txt"));
    CHECK_FALSE(fs::exists(d / "controller.json"));
}

TEST_CASE("synth with no guarantees wins everywhere") {
    const fs::path d = scratch("free");
    std::ofstream(d / "free.gr1") << "env bool a\nenv bool b\nsys bool c\nassume a0: a -> X(b)\n";
    const Run r = cli("synth --spec " + (d / "free.gr1").string() + " --out " + d.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "winning valuations: 8 of 8"));
}

TEST_CASE("check accepts fixtures and rejects broken specs") {
    CHECK(cli("check --spec " + kFixtures + "/seaquest.gr1").code == 0);
    const fs::path d = scratch("check");
    std::ofstream(d / "bad.gr1") << "env bool a\nsys bool c\nguarantee g: X(X(c))\n";
    CHECK(cli("check --spec " + (d / "bad.gr1").string()).code == 4);
    std::ofstream(d / "syntax.gr1") << "env bool a\nguarantee g: a &&\n";
    CHECK(cli("check --spec " + (d / "syntax.gr1").string()).code == 4);
    CHECK(cli("check --spec " + (d / "missing.gr1").string()).code != 0);
}

TEST_CASE("monitor flags the minepump violation") {
    const fs::path d = scratch("monitor");
    const Spec spec = load_spec(kFixtures + "/minepump.gr1");
    const fs::path tr = write_values(d / "tr.jsonl", scenarios::minepump_violation(), spec);
    const Run r = cli("monitor --spec " + kFixtures + "/minepump.gr1 --trace " + tr.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "steps: 3"));
    CHECK(contains(r.out, "assumption2"));

    const fs::path ok = write_values(d / "ok.jsonl", {{0, 0, 0}, {1, 0, 1}, {0, 0, 0}}, spec);
    const Run clean = cli("monitor --spec " + kFixtures + "/minepump.gr1 --trace " + ok.string());
    CHECK(clean.code == 0);
    CHECK_FALSE(contains(clean.out, "assumption2"));
}

TEST_CASE("repair on minepump deletes assumption2 and is idempotent") {
    const fs::path d = scratch("repair");
    const Spec spec = load_spec(kFixtures + "/minepump.gr1");
    const fs::path tr = write_values(d / "tr.jsonl", scenarios::minepump_violation(), spec);
    const Run r = cli("repair --spec " + kFixtures + "/minepump.gr1 --trace " + tr.string() + " --out " +
                      (d / "a").string());
    CHECK(r.code == 0);
    for (const char* f : {"spec_prime.gr1", "controller.json", "repair.diff", "edits.jsonl", "soundness.txt"})
        CHECK(fs::exists(d / "a" / f));
    CHECK(contains(slurp(d / "a" / "repair.diff"), "-assume assumption2"));
    CHECK(contains(slurp(d / "a" / "soundness.txt"), "realizable: 1"));
    const Spec prime = load_spec((d / "a" / "spec_prime.gr1").string());
    CHECK(structurally_equal(prime, load_spec(kFixtures + "/minepump_repaired.gr1")));

    const Run again = cli("repair --spec " + (d / "a" / "spec_prime.gr1").string() + " --trace " + tr.string() +
                          " --out " + (d / "b").string());
    CHECK(again.code == 0);
    CHECK(contains(again.out, "no edits"));
    CHECK(slurp(d / "b" / "repair.diff").empty());
    CHECK(slurp(d / "b" / "spec_prime.gr1") == slurp(d / "a" / "spec_prime.gr1"));
}

TEST_CASE("repair on a consistent trace changes nothing") {
    const fs::path d = scratch("identity");
    const Spec spec = load_spec(kFixtures + "/minepump.gr1");
    const fs::path tr = write_values(d / "tr.jsonl", {{0, 0, 0}, {1, 0, 1}, {0, 0, 0}}, spec);
    const Run r = cli("repair --spec " + kFixtures + "/minepump.gr1 --trace " + tr.string() + " --out " +
                      d.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "no edits"));
    CHECK(slurp(d / "repair.diff").empty());
    CHECK(structurally_equal(load_spec((d / "spec_prime.gr1").string()), spec));
}

TEST_CASE("repair on seaquest adds the fast depletion rate") {
    const fs::path d = scratch("seaquest");
    const Spec spec = load_spec(kFixtures + "/seaquest.gr1");
    const fs::path tr = write_values(d / "tr.jsonl", scenarios::seaquest_depletion(), spec);
    const Run r = cli("repair --spec " + kFixtures + "/seaquest.gr1 --trace " + tr.string() + " --out " +
                      d.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "oxygen - 2"));
    const Spec prime = load_spec((d / "spec_prime.gr1").string());
    CHECK(structurally_equal(prime, load_spec(kFixtures + "/seaquest_repaired.gr1")));
}

TEST_CASE("train then eval reproduces the evaluation metrics") {
    const fs::path d = scratch("train");
    const std::string common = "--env minepump --shield static-1 --seeds 2 --steps 3000 --eval-episodes 3 --out " +
                               d.string();
    const Run t = cli("train " + common + " --trace-out");
    REQUIRE(t.code == 0);
    for (const char* f : {"metrics.csv", "curves.csv", "qtable_seed0.txt", "qtable_seed1.txt", "trace_seed0.jsonl"})
        CHECK(fs::exists(d / f));
    const Run e = cli("eval " + common);
    REQUIRE(e.code == 0);
    const auto trained = csv_row(slurp(d / "metrics.csv"));
    const auto evaluated = csv_row(slurp(d / "eval_metrics.csv"));
    REQUIRE(trained.size() == evaluated.size());
    const auto first_eval = std::find(trained.begin(), trained.end(), "eval_reward_mean") - trained.begin();
    for (std::size_t i = first_eval; i < trained.size() / 2; ++i)
        CHECK(trained[trained.size() / 2 + i] == evaluated[evaluated.size() / 2 + i]);

    const Spec spec = load_spec(kFixtures + "/minepump.gr1");
    const auto recs = load_trace((d / "trace_seed0.jsonl").string(), spec);
    CHECK_FALSE(recs.empty());
}

TEST_CASE("reproduce is deterministic") {
    const fs::path d = scratch("repro");
    const std::string args = "reproduce --table minepump --seeds 2 --steps 2000 --eval-episodes 2 --out ";
    const Run a = cli(args + (d / "a").string());
    const Run b = cli(args + (d / "b").string());
    CHECK((a.code == 0 || a.code == 2));
    CHECK(a.code == b.code);
    REQUIRE(fs::exists(d / "a" / "metrics.csv"));
    CHECK(slurp(d / "a" / "metrics.csv") == slurp(d / "b" / "metrics.csv"));
    CHECK(slurp(d / "a" / "curves.csv") == slurp(d / "b" / "curves.csv"));
    CHECK(slurp(d / "a" / "pattern.csv") == slurp(d / "b" / "pattern.csv"));
}

TEST_CASE("usage errors fail") {
    CHECK(cli("").code != 0);
    CHECK(cli("synth").code != 0);
    CHECK(cli("train --env atari").code != 0);
    CHECK(cli("train --shield bogus --steps 10").code != 0);
    CHECK(cli("train --env minepump --shield naive --steps 10").code != 0);
}

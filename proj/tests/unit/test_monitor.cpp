#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gr1shield/monitor.hpp"

using namespace gr1shield;

namespace {

Spec fixture(const std::string& name) { return load_spec(std::string(GR1SHIELD_FIXTURES_DIR) + "/" + name); }

// Seaquest valuation: oxygen, depth, four divers, up, down, four rescue flags.
Assignment sq(std::int64_t oxygen, std::int64_t depth, std::int64_t down = 0) {
    return {oxygen, depth, 0, 0, 0, 0, 0, down, 0, 0, 0, 0};
}

}  // namespace

TEST_CASE("highwater with methane violates assumption2") {
    Spec s = fixture("minepump.gr1");
    std::vector<Assignment> tr{{0, 0, 0}, {1, 0, 1}, {1, 1, 0}};
    Verdict v = check_step(tr, s);
    CHECK(v.violated());
    CHECK(v.unit == "assumption2");
    CHECK(v.step == 2);
}

TEST_CASE("double depletion violates assumption1") {
    Spec s = fixture("seaquest.gr1");
    std::vector<Assignment> tr{sq(0, 0), sq(1, 0, 1), sq(2, 4), sq(1, 4)};
    CHECK(check_step(tr, s).ok());
    std::vector<Assignment> drift{sq(0, 0), sq(1, 0, 1), sq(2, 4), sq(0, 4)};
    Verdict v = check_step(drift, s);
    CHECK(v.violated());
    CHECK(v.unit == "assumption1");
    CHECK(v.step == 2);
}

TEST_CASE("single initial step is fine") {
    CHECK(check_step(std::vector<Assignment>{{0, 0, 0}}, fixture("minepump.gr1")).ok());
    CHECK(check_step(std::vector<Assignment>{sq(0, 0)}, fixture("seaquest.gr1")).ok());
    Verdict v = check_step(std::vector<Assignment>{sq(3, 0)}, fixture("seaquest.gr1"));
    CHECK(v.violated());
    CHECK(v.unit == "start_oxygen");
}

TEST_CASE("monitor freezes on the first violation") {
    Monitor m(fixture("minepump.gr1"));
    CHECK(m.push({1, 1, 0}).violated());
    CHECK(m.push({0, 0, 0}).unit == "assumption2");
    CHECK(m.length() == 1);
    m.reset();
    CHECK(m.push({0, 0, 0}).ok());
    CHECK_THROWS(m.push({0, 0}));
}

TEST_CASE("persistent methane raises a staleness warning") {
    Spec s = fixture("minepump_liveness_clearance.gr1");
    std::vector<Assignment> tr(600, Assignment{0, 1, 0, 0});
    auto ws = justice_staleness(tr, s, 500);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].kind == Verdict::Kind::JusticeWarning);
    CHECK(ws[0].unit == "methane_clearance");
    CHECK(ws[0].stale_for == 600);
    CHECK(justice_staleness(std::span(tr).first(499), s, 500).empty());
    CHECK_THROWS(justice_staleness(tr, s, 0));
}

TEST_CASE("a freshly satisfied justice unit gives no warning") {
    Spec s = parse_spec("env bool a\nsys bool b\nassume_justice live: a\n");
    std::vector<Assignment> tr(30, Assignment{0, 0});
    tr.back() = {1, 0};
    CHECK(justice_staleness(tr, s, 5).empty());
    tr.back() = {0, 0};
    CHECK(justice_staleness(tr, s, 5).size() == 1);
}

TEST_CASE("staleness matches a linear scan for the last satisfying window") {
    Spec s = fixture("minepump_liveness_clearance.gr1");
    std::mt19937_64 rng(8);
    std::bernoulli_distribution methane(0.7);
    for (int i = 0; i < 300; ++i) {
        std::vector<Assignment> tr;
        const std::size_t len = 1 + rng() % 120;
        for (std::size_t t = 0; t < len; ++t) tr.push_back({0, methane(rng) ? 1 : 0, 0, 0});
        // Last index j with !methane at j and j+1.
        long last = -1;
        for (std::size_t j = 0; j + 1 < tr.size(); ++j)
            if (!tr[j][1] && !tr[j + 1][1]) last = static_cast<long>(j);
        const std::size_t stale = tr.size() - static_cast<std::size_t>(last + 1);
        const std::size_t window = 1 + rng() % 20;
        auto ws = justice_staleness(tr, s, window);
        CHECK(ws.size() == (stale >= window ? 1u : 0u));
        if (!ws.empty()) CHECK(ws[0].stale_for == stale);
    }
}

TEST_CASE("verdicts print") {
    Verdict v;
    CHECK(to_string(v) == "ok");
    v.kind = Verdict::Kind::Violated;
    v.unit = "assumption2";
    v.step = 4;
    CHECK(to_string(v).find("assumption2") != std::string::npos);
}

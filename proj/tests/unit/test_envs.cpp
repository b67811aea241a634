#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gr1shield/binarize.hpp"
#include "gr1shield/envs.hpp"
#include "gr1shield/monitor.hpp"

using namespace gr1shield;

namespace {

Spec fixture(const std::string& name) { return load_spec(std::string(GR1SHIELD_FIXTURES_DIR) + "/" + name); }

}  // namespace

TEST_CASE("minepump kernel rows are stochastic") {
    MinepumpParams p;
    for (const auto& row : p.inflow_kernel) {
        double sum = 0.0;
        for (double x : row) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("inflow transitions follow the first kernel row") {
    Minepump env(EnvMode::Deployment);
    std::mt19937_64 rng(1);
    MinepumpState st;
    std::array<int, 3> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[env.step(st, false, rng).next.inflow];
    const std::array<double, 3> want{0.80, 0.18, 0.02};
    for (int k = 0; k < 3; ++k) {
        double sd = std::sqrt(want[k] * (1 - want[k]) / n);
        CHECK(std::abs(counts[k] / double(n) - want[k]) < 4 * sd);
    }
}

TEST_CASE("pumping removes six units and clips at zero") {
    Minepump env(EnvMode::Deployment);
    std::mt19937_64 rng(2);
    MinepumpState st;
    st.water = 12.0;
    int seen = 0;
    for (int i = 0; i < 200; ++i) {
        auto out = env.step(st, true, rng);
        if (out.next.inflow != 0) continue;
        CHECK(out.next.water == 6.0);
        ++seen;
    }
    CHECK(seen > 100);
    st.water = 0.0;
    for (int i = 0; i < 200; ++i) {
        auto out = env.step(st, true, rng);
        if (out.next.inflow == 0) CHECK(out.next.water == 0.0);
        CHECK(out.next.water >= 0.0);
    }
}

TEST_CASE("highwater label uses a strict threshold") {
    Minepump env;
    MinepumpState st;
    st.water = 11.0;
    CHECK(env.labels(st) == std::vector<std::int64_t>{1, 0});
    st.water = 10.0;
    st.methane = true;
    CHECK(env.labels(st) == std::vector<std::int64_t>{0, 1});
    CHECK(env.action_labels(1, st) == std::vector<std::int64_t>{1});
}

TEST_CASE("two pump steps always clear high water") {
    Minepump env(EnvMode::Deployment);
    std::mt19937_64 rng(3);
    for (double w = 0.0; w <= 18.0; w += 0.5)
        for (int inflow = 0; inflow < 3; ++inflow)
            for (int i = 0; i < 50; ++i) {
                MinepumpState st;
                st.water = w;
                st.inflow = inflow;
                auto a = env.step(st, true, rng).next;
                auto b = env.step(a, true, rng).next;
                REQUIRE_FALSE(env.highwater(b));
            }
}

TEST_CASE("reward charges switching, tariff and high water") {
    Minepump env(EnvMode::Deployment);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 2000; ++i) {
        MinepumpState st;
        st.water = static_cast<double>(rng() % 19);
        st.price = static_cast<int>(rng() % 2);
        st.inflow = static_cast<int>(rng() % 3);
        const bool pump = rng() % 2;
        auto out = env.step(st, pump, rng);
        double tariff = st.price == 0 ? 1.0 : 4.0;
        double want = -(pump ? 0.5 : 0.1) - (pump ? tariff : 0.0) - (env.highwater(out.next) ? 1.0 : 0.0);
        CHECK(out.reward == doctest::Approx(want));
    }
}

TEST_CASE("training keeps high water and methane apart; deployment does not") {
    std::mt19937_64 rng(5);
    auto count_both = [&](EnvMode mode) {
        Minepump env(mode);
        MinepumpState st;
        int both = 0;
        for (int i = 0; i < 10000; ++i) {
            st = env.step(st, rng() % 4 == 0, rng).next;
            both += env.highwater(st) && st.methane;
        }
        return both;
    };
    CHECK(count_both(EnvMode::Training) == 0);
    CHECK(count_both(EnvMode::Deployment) >= 1);
}

TEST_CASE("minepump abstract states stay in range") {
    Minepump env;
    std::mt19937_64 rng(6);
    MinepumpState st;
    for (int i = 0; i < 20000; ++i) {
        st = env.step(st, rng() % 2, rng).next;
        REQUIRE(env.abstract_state(st) < env.num_abstract_states());
    }
}

TEST_CASE("seaquest oxygen dynamics") {
    std::mt19937_64 rng(7);
    Seaquest train(EnvMode::Training), deploy(EnvMode::Deployment);
    SeaquestState st;
    st.oxygen = 63;
    CHECK(train.step(st, 0, rng).next.oxygen == 64);
    st.oxygen = 64;
    CHECK(train.step(st, 0, rng).next.oxygen == 64);
    st.oxygen = 48;
    st.depth = 8;
    CHECK(deploy.step(st, 0, rng).next.oxygen == 46);
    CHECK(train.step(st, 0, rng).next.oxygen == 47);
    st.depth = 92;
    CHECK(train.step(st, 2, rng).next.depth == 92);
    st.depth = 0;
    CHECK(train.step(st, 1, rng).next.depth == 0);
    CHECK_THROWS(train.step(st, 3, rng));
}

TEST_CASE("seaquest fails when oxygen runs out below the surface") {
    std::mt19937_64 rng(8);
    Seaquest env;
    SeaquestState st;
    st.oxygen = 1;
    st.depth = 4;
    auto n = env.step(st, 0, rng).next;
    CHECK(n.oxygen == 0);
    CHECK(env.terminal(n));
}

TEST_CASE("divers are rescued on co-location") {
    std::mt19937_64 rng(9);
    Seaquest env;
    SeaquestState st;
    st.oxygen = 30;
    st.depth = env.params().diver_depths[1];
    st.divers[1] = true;
    auto out = env.step(st, 0, rng);
    CHECK_FALSE(out.next.divers[1]);
    CHECK(out.next.rescue_flags[1]);
    CHECK(out.reward == 10.0);
}

TEST_CASE("seaquest labels decode back to the state") {
    Seaquest env;
    Spec s = fixture("seaquest.gr1");
    BitMap m(s.vars);
    for (int o = 0; o <= 64; ++o)
        for (int d = 0; d <= 92; d += 4) {
            SeaquestState st;
            st.oxygen = o;
            st.depth = d;
            st.divers = {o % 2 == 0, d % 8 == 0, o > 30, false};
            Assignment v = env.labels(st);
            auto act = env.action_labels(2, st);
            v.insert(v.end(), act.begin(), act.end());
            Assignment back = m.decode(m.encode(v));
            REQUIRE(back == v);
            CHECK(back[0] == o);
            CHECK(back[1] == d);
        }
    SeaquestState zero;
    Assignment bits = m.encode(Assignment{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    for (std::size_t b = m.offset(1); b < m.offset(1) + m.width(1); ++b) CHECK(bits[b] == 0);
    CHECK(env.labels(zero)[1] == 0);
}

namespace {

std::vector<Assignment> seaquest_run(const Seaquest& env, std::uint64_t seed, std::size_t len, int fill = 55) {
    std::mt19937_64 rng(seed);
    SeaquestState st = env.initial(rng);
    std::vector<Assignment> tr;
    for (std::size_t t = 0; t < len && !env.terminal(st); ++t) {
        // Fill up, then dive and hover.
        std::size_t a = st.depth == 0 && st.oxygen < fill ? 0 : st.depth < 8 ? 2 : 0;
        Assignment v = env.labels(st);
        auto act = env.action_labels(a, st);
        v.insert(v.end(), act.begin(), act.end());
        tr.push_back(v);
        st = env.step(st, a, rng).next;
    }
    return tr;
}

}  // namespace

TEST_CASE("seaquest training respects the assumptions; deployment breaks assumption1 at 48") {
    Spec s = fixture("seaquest.gr1");
    auto train = seaquest_run(Seaquest(EnvMode::Training), 10, 400);
    CHECK(check_step(train, s).ok());
    // Passing 48 at the surface latches the fast rate for the next dive.
    auto latched = seaquest_run(Seaquest(EnvMode::Deployment), 10, 400, 55);
    Verdict w = check_step(latched, s);
    REQUIRE(w.violated());
    CHECK(w.unit == "assumption1");
    std::size_t crossing = 0;
    while (latched[crossing][0] != 48) ++crossing;
    std::size_t first_dive = crossing;
    while (latched[first_dive][1] == 0) ++first_dive;
    CHECK(w.step == first_dive);
    CHECK(latched[w.step + 1][0] == latched[w.step][0] - 2);
    for (std::size_t i = 0; i < crossing; ++i) CHECK(latched[i][0] < 48);
}

TEST_CASE("fixed seeds give identical trajectories") {
    auto a = seaquest_run(Seaquest(EnvMode::Deployment), 11, 300);
    auto b = seaquest_run(Seaquest(EnvMode::Deployment), 11, 300);
    CHECK(a == b);
    Minepump env(EnvMode::Deployment);
    std::mt19937_64 r1(12), r2(12);
    MinepumpState x, y;
    for (int i = 0; i < 1000; ++i) {
        x = env.step(x, i % 3 == 0, r1).next;
        y = env.step(y, i % 3 == 0, r2).next;
        REQUIRE(x.water == y.water);
        REQUIRE(x.methane == y.methane);
    }
}

TEST_CASE("mode names parse") {
    CHECK(parse_mode("training") == EnvMode::Training);
    CHECK(to_string(EnvMode::Deployment) == "deployment");
    CHECK_THROWS(parse_mode("testing"));
}

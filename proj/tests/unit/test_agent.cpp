#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gr1shield/agent.hpp"

using namespace gr1shield;

TEST_CASE("greedy selection with eps 0") {
    QTable q(2, 3);
    q.at(0, 2) = 1.5;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) CHECK(select_action(q, 0, 0.0, rng) == 2);
    CHECK(q.greedy(1) == 0);  // all zero: lowest index
    q.at(1, 1) = 2.0;
    q.at(1, 2) = 2.0;
    CHECK(q.greedy(1) == 1);
}

TEST_CASE("eps 1 draws uniformly") {
    QTable q(1, 4);
    q.at(0, 3) = 10.0;
    std::mt19937_64 rng(2);
    std::array<int, 4> counts{};
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++counts[select_action(q, 0, 1.0, rng)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
    // 99.9% quantile of chi-square with 3 degrees of freedom.
    CHECK(chi2 < 16.27);
    for (int c : counts) CHECK(std::abs(c - n / 4.0) < 3 * std::sqrt(n * 0.25 * 0.75));
}

TEST_CASE("greedy among an allowed subset") {
    QTable q(1, 3);
    q.at(0, 0) = 5.0;
    q.at(0, 1) = 1.0;
    q.at(0, 2) = 1.0;
    std::vector<std::size_t> allowed{1, 2};
    CHECK(q.greedy_among(0, allowed) == 1);
    CHECK(q.greedy_among(0, {}) == 0);
}

TEST_CASE("myopic full-step update stores the reward") {
    QTable q(2, 2);
    q.at(1, 0) = 100.0;
    AgentConfig cfg;
    cfg.alpha = 1.0;
    cfg.gamma = 0.0;
    q_update(q, 0, 1, 3.5, 1, cfg);
    CHECK(q.at(0, 1) == 3.5);
    CHECK(q.visits(0, 1) == 1);
}

TEST_CASE("terminal updates drop the bootstrap") {
    QTable q(2, 1);
    q.at(1, 0) = 100.0;
    AgentConfig cfg;
    cfg.alpha = 1.0;
    cfg.gamma = 0.9;
    q_update(q, 0, 0, 1.0, 1, cfg, true);
    CHECK(q.at(0, 0) == 1.0);
    q_update(q, 0, 0, 1.0, 1, cfg, false);
    CHECK(q.at(0, 0) == doctest::Approx(91.0));
}

TEST_CASE("two-state chain converges to the geometric series") {
    // 0 -> 1 with reward 1, 1 -> 0 with reward 0.
    AgentConfig cfg;
    cfg.alpha = 0.5;
    cfg.gamma = 0.9;
    QTable q(2, 1);
    for (int sweep = 0; sweep < 10000; ++sweep) {
        q_update(q, 0, 0, 1.0, 1, cfg);
        q_update(q, 1, 0, 0.0, 0, cfg);
    }
    const double g = cfg.gamma;
    CHECK(std::abs(q.at(0, 0) - 1.0 / (1 - g * g)) < 1e-6);
    CHECK(std::abs(q.at(1, 0) - g / (1 - g * g)) < 1e-6);
}

TEST_CASE("values stay within the reward bound") {
    AgentConfig cfg;
    cfg.gamma = 0.95;
    QTable q(5, 2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> reward(-2.0, 2.0);
    for (int i = 0; i < 200000; ++i) q_update(q, rng() % 5, rng() % 2, reward(rng), rng() % 5, cfg);
    for (std::size_t s = 0; s < 5; ++s)
        for (std::size_t a = 0; a < 2; ++a) {
            CHECK(std::isfinite(q.at(s, a)));
            CHECK(std::abs(q.at(s, a)) <= 2.0 / (1 - cfg.gamma) + 1e-9);
        }
}

TEST_CASE("epsilon decays linearly then holds") {
    AgentConfig cfg;
    cfg.total_steps = 1000;
    cfg.decay_fraction = 0.2;
    CHECK(cfg.epsilon(0) == doctest::Approx(1.0));
    CHECK(cfg.epsilon(100) == doctest::Approx(0.525));
    CHECK(cfg.epsilon(200) == doctest::Approx(0.05));
    CHECK(cfg.epsilon(900) == doctest::Approx(0.05));
}

TEST_CASE("config validation") {
    AgentConfig ok;
    CHECK_NOTHROW(ok.validate());
    AgentConfig bad = ok;
    bad.alpha = 0.0;
    CHECK_THROWS(bad.validate());
    bad = ok;
    bad.gamma = 1.0;
    CHECK_THROWS(bad.validate());
    bad = ok;
    bad.epsilon_final = 1.5;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("tables save and load exactly") {
    QTable q(3, 2);
    q.at(0, 1) = 1.0 / 3.0;
    q.at(2, 0) = -123.456789012345678;
    std::stringstream ss;
    q.save(ss);
    QTable back = QTable::load(ss);
    REQUIRE(back.states() == 3);
    REQUIRE(back.actions() == 2);
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t a = 0; a < 2; ++a) CHECK(back.at(s, a) == q.at(s, a));
}

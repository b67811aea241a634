#include <algorithm>
#include <stdexcept>

#include "gr1shield/envs.hpp"

namespace gr1shield {

EnvMode parse_mode(const std::string& s) {
    if (s == "training") return EnvMode::Training;
    if (s == "deployment") return EnvMode::Deployment;
    throw std::invalid_argument("unknown mode '" + s + "' (expected training or deployment)");
}

std::string to_string(EnvMode m) { return m == EnvMode::Training ? "training" : "deployment"; }

Minepump::Minepump(EnvMode mode, MinepumpParams params) : mode_(mode), p_(params) {}

MinepumpState Minepump::initial(std::mt19937_64&) const { return MinepumpState{}; }

int Minepump::sample(const std::array<double, 3>& row, std::mt19937_64& rng) const {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (int i = 0; i < 2; ++i) {
        if (u < row[i]) return i;
        u -= row[i];
    }
    return 2;
}

MinepumpStep Minepump::step(const MinepumpState& st, bool pump, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    MinepumpStep out;
    MinepumpState& n = out.next;
    const bool coupled = mode_ == EnvMode::Training;

    // Methane first, so that the inflow draw can respect it.
    if (st.methane) n.methane = coin(rng) >= p_.methane_off;
    else n.methane = coin(rng) < p_.methane_on && !(coupled && st.water > p_.high);

    const auto& row = p_.inflow_kernel[st.inflow];
    for (;;) {
        n.inflow = sample(row, rng);
        n.water = std::clamp(st.water + p_.inflow_rates[n.inflow] - (pump ? p_.removal : 0.0), 0.0, p_.max_water);
        if (!(coupled && n.methane && n.water > p_.high)) break;
    }

    n.price = coin(rng) < p_.price_persistence ? st.price : 1 - st.price;
    n.last_pump = pump;
    n.last_last_pump = st.last_pump;

    const double tariff = p_.tariffs[st.price];
    out.reward = -(pump ? p_.pump_on_cost : p_.pump_off_cost) - (pump ? tariff : 0.0) -
                 (highwater(n) ? p_.highwater_penalty : 0.0);
    return out;
}

std::vector<std::int64_t> Minepump::labels(const MinepumpState& st) const {
    return {highwater(st) ? 1 : 0, st.methane ? 1 : 0};
}

std::vector<std::int64_t> Minepump::action_labels(std::size_t a, const MinepumpState&) const {
    return {a == 1 ? 1 : 0};
}

std::size_t Minepump::num_abstract_states() const { return 10 * 3 * 2 * 2 * 2; }

std::size_t Minepump::abstract_state(const MinepumpState& st) const {
    // Buckets never straddle the high-water threshold.
    const std::size_t bucket =
        highwater(st) ? 6 + std::min<std::size_t>(3, static_cast<std::size_t>((st.water - p_.high) / 2.0))
                      : std::min<std::size_t>(5, static_cast<std::size_t>(st.water / 2.0));
    std::size_t s = bucket;
    s = s * 3 + static_cast<std::size_t>(st.inflow);
    s = s * 2 + (st.methane ? 1 : 0);
    s = s * 2 + static_cast<std::size_t>(st.price);
    s = s * 2 + (st.last_pump ? 1 : 0);
    return s;
}

}  // namespace gr1shield

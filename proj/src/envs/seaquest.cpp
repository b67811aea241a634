#include <stdexcept>

#include "gr1shield/envs.hpp"

namespace gr1shield {

Seaquest::Seaquest(EnvMode mode, SeaquestParams params) : mode_(mode), p_(params) {}

SeaquestState Seaquest::initial(std::mt19937_64&) const { return SeaquestState{}; }

SeaquestStep Seaquest::step(const SeaquestState& st, std::size_t action, std::mt19937_64& rng) const {
    if (action >= num_actions) throw std::invalid_argument("invalid seaquest action");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    SeaquestStep out;
    SeaquestState& n = out.next;
    n.depletion_rate = st.depletion_rate;
    if (mode_ == EnvMode::Deployment && st.oxygen == p_.violation_oxygen) n.depletion_rate = p_.fast_rate;

    if (st.depth > 0) n.oxygen = st.oxygen > 0 ? std::max(0, st.oxygen - n.depletion_rate) : 0;
    else n.oxygen = std::min(p_.max_oxygen, st.oxygen + 1);

    n.depth = st.depth;
    if (action == 1 && st.depth > 0) n.depth = st.depth - p_.depth_step;
    if (action == 2 && st.depth < p_.max_depth) n.depth = st.depth + p_.depth_step;

    for (int i = 0; i < 4; ++i) {
        const bool rescued = st.divers[i] && st.depth == p_.diver_depths[i];
        n.rescue_flags[i] = rescued;
        if (rescued) {
            n.divers[i] = false;
            out.reward += p_.rescue_reward;
        } else if (st.divers[i]) {
            n.divers[i] = true;
        } else {
            n.divers[i] = coin(rng) < p_.respawn;
        }
    }
    n.failed = st.failed || (n.oxygen == 0 && n.depth > 0);
    return out;
}

std::vector<std::string> Seaquest::env_vars() {
    return {"oxygen", "depth", "diver_at_depth1", "diver_at_depth2", "diver_at_depth3", "diver_at_depth4"};
}

std::vector<std::string> Seaquest::sys_vars() { return {"up", "down", "rescues1", "rescues2", "rescues3", "rescues4"}; }

std::vector<std::int64_t> Seaquest::labels(const SeaquestState& st) const {
    return {st.oxygen, st.depth, st.divers[0], st.divers[1], st.divers[2], st.divers[3]};
}

std::vector<std::int64_t> Seaquest::action_labels(std::size_t a, const SeaquestState& st) const {
    return {a == 1 ? 1 : 0, a == 2 ? 1 : 0, st.rescue_flags[0], st.rescue_flags[1], st.rescue_flags[2],
            st.rescue_flags[3]};
}

std::size_t Seaquest::num_abstract_states() const {
    const std::size_t depths = static_cast<std::size_t>(p_.max_depth / p_.depth_step + 1);
    return static_cast<std::size_t>(p_.max_oxygen + 1) * depths * 16;
}

std::size_t Seaquest::abstract_state(const SeaquestState& st) const {
    const std::size_t depths = static_cast<std::size_t>(p_.max_depth / p_.depth_step + 1);
    std::size_t divers = 0;
    for (int i = 0; i < 4; ++i) divers |= static_cast<std::size_t>(st.divers[i]) << i;
    return (static_cast<std::size_t>(st.oxygen) * depths + static_cast<std::size_t>(st.depth / p_.depth_step)) * 16 +
           divers;
}

}  // namespace gr1shield

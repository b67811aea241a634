#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

#include "gr1shield/controller.hpp"
#include "parity.hpp"

namespace gr1shield {

std::optional<CounterStrategy::Move> CounterStrategy::move(State s, std::size_t ce, std::size_t cs) const {
    auto it = moves.find(key(s, ce, cs));
    if (it == moves.end()) return std::nullopt;
    return it->second;
}

namespace {

/// Enumerates every assignment of the bits in `mask`.
template <typename F>
void for_each_subset(State mask, F&& fn) {
    State sub = 0;
    for (;;) {
        fn(sub);
        if (sub == mask) break;
        sub = (sub - mask) & mask;
    }
}

std::vector<std::string> layout_of(const Game& g) {
    std::vector<std::string> out;
    for (unsigned b = 0; b < g.num_bits(); ++b) out.push_back(g.bit_name(b));
    for (const auto& a : g.aux()) out.push_back(a.label);
    return out;
}

struct Membership {
    std::vector<std::vector<char>> je, js;
    Membership(const Game& g) {
        const std::size_t n = std::size_t{1} << g.num_bits();
        for (const auto& j : g.justice_e()) {
            std::vector<char> m(n);
            for (State s = 0; s < n; ++s) m[s] = g.eval_state(j, s);
            je.push_back(std::move(m));
        }
        for (const auto& j : g.justice_s()) {
            std::vector<char> m(n);
            for (State s = 0; s < n; ++s) m[s] = g.eval_state(j, s);
            js.push_back(std::move(m));
        }
    }
};

}  // namespace

std::optional<CounterStrategy> counter_strategy(const Game& g, std::size_t max_nodes) {
    const std::size_t n_states = std::size_t{1} << g.num_bits();
    const std::size_t ne = g.justice_e().size();
    const std::size_t ns = g.justice_s().size();
    const State env_spec = g.env_mask() & g.spec_mask();
    const State sys = g.sys_mask();
    const std::size_t env_moves = std::size_t{1} << std::popcount(env_spec);
    const std::size_t estimate = n_states * ne * ns * (1 + env_moves);
    if (estimate > max_nodes)
        throw GameError("counter-strategy product of " + std::to_string(estimate) + " nodes exceeds the cap");

    Membership mem(g);
    detail::ParityGame pg;
    const std::uint32_t sys_wins = pg.add(0, 0);
    const std::uint32_t env_wins = pg.add(1, 1);
    pg.succ[sys_wins].push_back(sys_wins);
    pg.succ[env_wins].push_back(env_wins);

    auto env_node = [&](State s, std::size_t ce, std::size_t cs) {
        return static_cast<std::uint32_t>(2 + (s * ne + ce) * ns + cs);
    };
    for (State s = 0; s < n_states; ++s) {
        for (std::size_t ce = 0; ce < ne; ++ce) {
            for (std::size_t cs = 0; cs < ns; ++cs) {
                std::uint8_t prio = 0;
                if (mem.js[cs][s] && cs == ns - 1) prio = 2;
                else if (mem.je[ce][s] && ce == ne - 1) prio = 1;
                pg.add(1, prio);
            }
        }
    }
    struct SysInfo {
        State s;
        State x;
        std::uint32_t ce, cs;
    };
    std::vector<SysInfo> sys_info;
    const std::uint32_t first_sys = static_cast<std::uint32_t>(pg.size());
    for (State s = 0; s < n_states; ++s) {
        const State aux_next = g.aux_successor(s);
        for (std::size_t ce = 0; ce < ne; ++ce) {
            for (std::size_t cs = 0; cs < ns; ++cs) {
                const std::uint32_t ce2 = static_cast<std::uint32_t>(mem.je[ce][s] ? (ce + 1) % ne : ce);
                const std::uint32_t cs2 = static_cast<std::uint32_t>(mem.js[cs][s] ? (cs + 1) % ns : cs);
                const std::uint32_t e = env_node(s, ce, cs);
                for_each_subset(env_spec, [&](State xs) {
                    const State x = xs | aux_next;
                    if (!g.eval_pair(g.rho_e(), s, x)) return;
                    const std::uint32_t v = pg.add(0, 0);
                    sys_info.push_back({s, x, ce2, cs2});
                    pg.succ[e].push_back(v);
                    for_each_subset(sys, [&](State y) {
                        const State t = x | y;
                        if (g.eval_pair(g.rho_s(), s, t)) pg.succ[v].push_back(env_node(t, ce2, cs2));
                    });
                    if (pg.succ[v].empty()) pg.succ[v].push_back(env_wins);
                });
                if (pg.succ[e].empty()) pg.succ[e].push_back(sys_wins);
            }
        }
    }

    detail::ParitySolution sol = detail::solve_parity(pg);

    // Initial choice: some x0 with theta_e whose every theta_s completion is lost.
    std::optional<State> x0;
    const State env_all = g.env_mask();
    for_each_subset(env_all, [&](State x) {
        if (x0 || !g.eval_state(g.theta_e(), x)) return;
        bool all_lost = true;
        for_each_subset(sys, [&](State y) {
            const State s = x | y;
            if (g.eval_state(g.theta_s(), s) && sol.winner[env_node(s, 0, 0)] == 0) all_lost = false;
        });
        if (all_lost) x0 = x;
    });
    if (!x0) return std::nullopt;

    CounterStrategy cs;
    cs.layout = layout_of(g);
    cs.ne = ne;
    cs.ns = ns;
    cs.initial_env = *x0;
    for (State s = 0; s < n_states; ++s) {
        for (std::size_t ce = 0; ce < ne; ++ce) {
            for (std::size_t csi = 0; csi < ns; ++csi) {
                const std::uint32_t e = env_node(s, ce, csi);
                if (sol.winner[e] != 1) continue;
                const std::uint32_t v = sol.strategy[e];
                if (v == detail::ParitySolution::kNone || v < first_sys) continue;
                const SysInfo& info = sys_info[v - first_sys];
                cs.moves[cs.key(s, ce, csi)] = {info.x, info.ce, info.cs};
            }
        }
    }
    return cs;
}

bool defeats(const CounterStrategy& cs, const Game& g, std::size_t max_nodes) {
    if (layout_of(g) != cs.layout || g.justice_e().size() != cs.ne) return false;
    Membership mem(g);
    const State sys = g.sys_mask();

    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<State> node_state;
    std::vector<std::vector<std::uint32_t>> succ;
    std::vector<std::uint64_t> keys;
    std::vector<std::uint32_t> todo;
    bool escaped = false;

    auto intern = [&](State s, std::size_t ce, std::size_t csi) {
        const std::uint64_t k = cs.key(s, ce, csi);
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        const std::uint32_t id = static_cast<std::uint32_t>(node_state.size());
        index.emplace(k, id);
        node_state.push_back(s);
        keys.push_back(k);
        succ.emplace_back();
        todo.push_back(id);
        return id;
    };

    for_each_subset(sys, [&](State y) {
        const State s = cs.initial_env | y;
        if (g.eval_state(g.theta_s(), s)) intern(s, 0, 0);
    });
    while (!todo.empty() && !escaped) {
        if (node_state.size() > max_nodes) throw GameError("counter-strategy replay exceeds the node cap");
        const std::uint32_t id = todo.back();
        todo.pop_back();
        const State s = node_state[id];
        const std::uint64_t k = keys[id];
        const std::size_t csi = k % cs.ns;
        const std::size_t ce = (k / cs.ns) % cs.ne;
        auto mv = cs.move(s, ce, csi);
        if (!mv) {
            escaped = true;
            break;
        }
        for_each_subset(sys, [&](State y) {
            const State t = mv->env_next | y;
            if (g.eval_pair(g.rho_s(), s, t)) {
                const std::uint32_t w = intern(t, mv->ce_next, mv->cs_next);
                succ[id].push_back(w);
            }
        });
    }
    if (escaped) return false;

    // Tarjan SCCs over the (fully explored) replay graph restricted by `keep`.
    const std::size_t n = node_state.size();
    auto system_wins_in = [&](const std::function<bool(std::uint32_t)>& keep, bool need_all_js) {
        std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
        std::vector<char> on_stack(n, 0);
        std::vector<std::uint32_t> stack;
        int counter = 0, ncomp = 0;
        bool found = false;
        std::function<void(std::uint32_t)> strong = [&](std::uint32_t v) {
            idx[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = 1;
            for (auto w : succ[v]) {
                if (!keep(w)) continue;
                if (idx[w] < 0) {
                    strong(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
            }
            if (low[v] != idx[v]) return;
            std::vector<std::uint32_t> members;
            for (;;) {
                std::uint32_t w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = ncomp;
                members.push_back(w);
                if (w == v) break;
            }
            bool cyclic = members.size() > 1;
            if (!cyclic)
                for (auto w : succ[v])
                    if (w == v) cyclic = true;
            if (cyclic) {
                if (!need_all_js) {
                    found = true;
                } else {
                    bool all = true;
                    for (const auto& js : mem.js) {
                        bool hit = false;
                        for (auto m : members)
                            if (js[node_state[m]]) hit = true;
                        if (!hit) all = false;
                    }
                    if (all) found = true;
                }
            }
            ++ncomp;
        };
        for (std::uint32_t v = 0; v < n; ++v)
            if (keep(v) && idx[v] < 0) strong(v);
        return found;
    };

    if (system_wins_in([](std::uint32_t) { return true; }, true)) return false;
    for (const auto& je : mem.je) {
        if (system_wins_in([&](std::uint32_t v) { return !je[node_state[v]]; }, false)) return false;
    }
    return true;
}

std::string CounterStrategy::describe(const Game& g, std::size_t max_lines) const {
    std::ostringstream os;
    auto bits = [&](State s) {
        std::string out;
        for (unsigned b = 0; b < g.num_bits(); ++b) {
            if (!out.empty()) out += ' ';
            out += (((s >> b) & 1) ? "" : "!") + g.bit_name(b);
        }
        return out;
    };
    os << "initial env choice: " << bits(initial_env & g.env_mask()) << "\n";
    std::vector<std::uint64_t> keys;
    for (const auto& entry : moves) keys.push_back(entry.first);
    std::sort(keys.begin(), keys.end());
    std::size_t lines = 0;
    for (std::uint64_t k : keys) {
        const Move& mv = moves.at(k);
        if (lines++ >= max_lines) {
            os << "...\n";
            break;
        }
        const std::size_t csi = k % ns;
        const std::size_t ce = (k / ns) % ne;
        const State s = k / ns / ne;
        os << "[" << bits(s) << "] ce=" << ce << " cs=" << csi << " -> env " << bits(mv.env_next & g.env_mask())
           << "\n";
    }
    return os.str();
}

}  // namespace gr1shield

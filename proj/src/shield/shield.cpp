#include "gr1shield/shield.hpp"

#include <algorithm>

namespace gr1shield {

Labeller::Labeller(const Controller& ctrl, const std::vector<std::string>& names) {
    const Spec& src = ctrl.source();
    for (const auto& n : names) {
        int i = src.var_index(n);
        if (i < 0) throw SpecError("labeller variable '" + n + "' is not declared in the spec");
        const VarDecl& d = src.vars[i];
        vars_.push_back({ctrl.bits().offset(i), ctrl.bits().width(i), d.lo, d.step, d.hi, d.name});
    }
}

State Labeller::encode(std::span<const std::int64_t> values) const {
    if (values.size() != vars_.size()) throw std::invalid_argument("labeller arity mismatch");
    State s = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const Slot& v = vars_[i];
        const std::int64_t x = values[i];
        if (x < v.lo || x > v.hi || (x - v.lo) % v.step != 0)
            throw SpecError("value " + std::to_string(x) + " outside the domain of '" + v.name + "'");
        s |= static_cast<State>((x - v.lo) / v.step) << v.offset;
    }
    return s;
}

ShieldState shield_init(std::shared_ptr<const Controller> ctrl, State env_bits) {
    ShieldState st;
    st.controller = std::move(ctrl);
    const Controller& c = *st.controller;
    const State s = c.initial_state(env_bits & c.game().env_mask());
    if (!c.theta_e(s)) throw AssumptionViolation("initial observation violates the initial assumptions");
    auto init = c.initial_completion(s);
    if (!init) throw UnrealizableError("no initial system valuation inside the winning region");
    st.current = *init;
    return st;
}

State shield_candidate(const ShieldState& st, State env_bits, State sys_bits) {
    const Controller& c = *st.controller;
    const Game& g = c.game();
    const State bits = (env_bits & g.env_mask()) | (sys_bits & g.sys_mask());
    return st.step_count == 0 ? c.initial_state(bits) : c.successor(st.current, bits);
}

bool env_respects(const ShieldState& st, State env_bits) {
    const Controller& c = *st.controller;
    const State t = shield_candidate(st, env_bits, 0);
    return st.step_count == 0 ? c.theta_e(t) : c.rho_e(st.current, t);
}

std::vector<std::size_t> safe_actions(const ShieldState& st, State env_bits, std::span<const State> action_sys) {
    const Controller& c = *st.controller;
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < action_sys.size(); ++a) {
        const State t = shield_candidate(st, env_bits, action_sys[a]);
        const bool ok = st.step_count == 0 ? c.game().eval_state(c.game().theta_s(), t) && c.in_region(t)
                                           : c.allowed(st.current, t);
        if (ok) out.push_back(a);
    }
    return out;
}

FilterResult filter(ShieldState& st, std::span<const std::size_t> safe, std::size_t proposed,
                    std::span<const double> ranking, std::mt19937_64& rng) {
    FilterResult r;
    if (safe.empty()) {
        ++st.deadlock_count;
        r.chosen = proposed;
        r.deadlock = true;
        return r;
    }
    if (std::find(safe.begin(), safe.end(), proposed) != safe.end()) {
        r.chosen = proposed;
        return r;
    }
    r.overridden = true;
    ++st.override_count;
    if (!ranking.empty()) {
        r.chosen = safe[0];
        for (std::size_t a : safe)
            if (ranking[a] > ranking[r.chosen] || (ranking[a] == ranking[r.chosen] && a < r.chosen)) r.chosen = a;
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, safe.size() - 1);
        r.chosen = safe[pick(rng)];
    }
    return r;
}

CommitResult commit(ShieldState& st, State env_bits, State sys_bits) {
    const Controller& c = *st.controller;
    CommitResult r;
    r.assumptions_held = env_respects(st, env_bits);
    st.current = shield_candidate(st, env_bits, sys_bits);
    r.in_region = c.in_region(st.current);
    ++st.step_count;
    return r;
}

}  // namespace gr1shield

#include "gr1shield/repair.hpp"

#include <algorithm>

#include "hypotheses.hpp"
#include "semantics.hpp"

namespace gr1shield {

using detail::RankedEdit;
using detail::RankedHypothesis;

std::vector<Edit> RepairOutcome::edits() const {
    std::vector<Edit> out = assumption_edits.edits;
    out.insert(out.end(), guarantee_edits.edits.begin(), guarantee_edits.edits.end());
    return out;
}

namespace {

struct Violation {
    const Unit* unit;
    std::size_t step;
};

std::vector<Violation> violated_assumptions(const Spec& spec, TraceView tr) {
    Evaluator ev(spec);
    std::vector<Violation> out;
    if (tr.empty()) return out;
    for (const auto& u : spec.units) {
        if (u.kind == UnitKind::AssumeInit) {
            if (has_next(u.formula) && tr.size() < 2) continue;
            if (!ev.eval(u.formula, tr, 0)) out.push_back({&u, 0});
        } else if (u.kind == UnitKind::Assume) {
            if (auto i = ev.first_failure(u.formula, tr)) out.push_back({&u, *i});
        }
    }
    return out;
}

bool admits(const Evaluator& ev, const Unit& u, const FormulaPtr& f, TraceView tr) {
    if (u.kind == UnitKind::AssumeInit) {
        if (has_next(f) && tr.size() < 2) return true;
        return ev.eval(f, tr, 0);
    }
    return !ev.first_failure(f, tr).has_value();
}

/// Best-first product of per-unit edit lists, capped.
std::vector<RankedHypothesis> product(const std::vector<std::vector<RankedEdit>>& lists, std::size_t cap) {
    std::vector<RankedHypothesis> out;
    std::vector<const RankedEdit*> parts;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (out.size() >= cap) return;
        if (k == lists.size()) {
            out.push_back(detail::combine(parts));
            return;
        }
        for (const auto& e : lists[k]) {
            parts.push_back(&e);
            rec(k + 1);
            parts.pop_back();
            if (out.size() >= cap) return;
        }
    };
    rec(0);
    std::stable_sort(out.begin(), out.end(), detail::hypothesis_less);
    return out;
}

Vocabulary merged_vocabulary(const Spec& spec, TraceView tr, const std::vector<Violation>& vs) {
    Vocabulary all;
    for (const auto& v : vs) {
        Vocabulary one = violation_vocabulary(spec, tr, {v.unit->name}, v.step);
        for (std::size_t i = 0; i < one.vars.size(); ++i) {
            if (std::find(all.vars.begin(), all.vars.end(), one.vars[i]) != all.vars.end()) continue;
            all.vars.push_back(one.vars[i]);
            all.delta.push_back(one.delta[i]);
        }
    }
    return all;
}

}  // namespace

std::vector<Hypothesis> weaken_assumptions(const Spec& spec, TraceView tr, const RepairLimits& limits) {
    const std::vector<Violation> vs = violated_assumptions(spec, tr);
    if (vs.empty()) return {Hypothesis{}};
    Evaluator ev(spec);
    detail::Semantics sem(spec, limits.game);
    const int del = detail::delete_cost(spec, limits.max_literals);
    std::vector<std::vector<RankedEdit>> lists;
    for (const auto& v : vs) {
        const Vocabulary vocab = violation_vocabulary(spec, tr, {v.unit->name}, v.step);
        auto keep = [&](const Edit& e) {
            if (e.kind == Edit::Kind::Delete) return !v.unit->generated;
            if (!admits(ev, *v.unit, e.new_formula, tr)) return false;
            return !sem.valid(e.new_formula) && !sem.equivalent(e.old_formula, e.new_formula);
        };
        lists.push_back(detail::unit_edits(spec, *v.unit, vocab, limits.max_literals, del, keep));
        if (lists.back().empty()) throw RepairError("no admissible weakening of '" + v.unit->name + "'");
    }
    std::vector<Hypothesis> out;
    for (auto& h : product(lists, 4096)) out.push_back(std::move(h.hyp));
    return out;
}

GuaranteeSearch weaken_guarantees(const Spec& spec_a, const Vocabulary& vocab, const std::optional<CounterStrategy>& cs,
                                  bool allow_critical, const RepairLimits& limits) {
    GuaranteeSearch search;
    detail::Semantics sem(spec_a, limits.game);
    const int del = detail::delete_cost(spec_a, limits.max_literals);
    std::vector<std::vector<RankedEdit>> per_unit;
    for (const auto& u : spec_a.units) {
        if (u.generated || (u.kind != UnitKind::Guarantee && u.kind != UnitKind::GuaranteeInit)) continue;
        if (u.critical && !allow_critical) continue;
        auto keep = [&](const Edit& e) {
            if (e.kind == Edit::Kind::Delete) return true;
            return !sem.valid(e.new_formula) && !sem.equivalent(e.old_formula, e.new_formula);
        };
        auto edits = detail::unit_edits(spec_a, u, vocab, limits.max_literals, del, keep);
        if (!edits.empty()) per_unit.push_back(std::move(edits));
    }
    std::vector<RankedHypothesis> cands;
    for (const auto& list : per_unit)
        for (const auto& e : list) cands.push_back(detail::combine({&e}));
    for (std::size_t a = 0; a < per_unit.size(); ++a)
        for (std::size_t b = a + 1; b < per_unit.size(); ++b)
            for (const auto& x : per_unit[a])
                for (const auto& y : per_unit[b])
                    if (x.edit.cost == 1 && y.edit.cost == 1) cands.push_back(detail::combine({&x, &y}));
    std::stable_sort(cands.begin(), cands.end(), detail::hypothesis_less);

    std::vector<CounterStrategy> pool;
    if (cs) pool.push_back(*cs);
    for (const auto& c : cands) {
        const Spec candidate = apply(spec_a, c.hyp);
        Game g(binarize(candidate).spec, limits.game);
        bool pruned = false;
        for (const auto& s : pool) {
            try {
                if (defeats(s, g)) {
                    pruned = true;
                    break;
                }
            } catch (const GameError&) {
            }
        }
        if (pruned) {
            ++search.candidates_pruned;
            continue;
        }
        ++search.realizability_calls;
        if (is_realizable(g, winning_region_bdd(g))) {
            search.result = c.hyp;
            return search;
        }
        if (++search.rounds >= limits.max_rounds) return search;
        try {
            if (auto next = counter_strategy(g)) pool.push_back(std::move(*next));
        } catch (const GameError&) {
        }
    }
    return search;
}

bool assumptions_implied(const Spec& spec, const Spec& spec_prime) {
    detail::Semantics sem(spec);
    auto side = [&](const Spec& s, bool init) {
        bdd::Bdd acc = sem.truth();
        for (const auto& u : s.units) {
            if (init && (u.kind == UnitKind::AssumeInit || (u.kind == UnitKind::Assume && !has_next(u.formula))))
                acc &= sem.encode(u.formula);
            if (!init && u.kind == UnitKind::Assume) acc &= sem.step(u);
        }
        return acc;
    };
    if (!sem.implies(side(spec, true), side(spec_prime, true))) return false;
    if (!sem.implies(side(spec, false), side(spec_prime, false))) return false;
    for (const auto& j2 : spec_prime.units) {
        if (j2.kind != UnitKind::AssumeJustice) continue;
        bool covered = sem.valid(j2.formula);
        for (const auto& j1 : spec.units)
            if (j1.kind == UnitKind::AssumeJustice && sem.implies(j1.formula, j2.formula)) covered = true;
        if (!covered) return false;
    }
    return true;
}

bool guarantees_implied(const Spec& spec, const Spec& spec_prime) {
    detail::Semantics sem(spec);
    auto side = [&](const Spec& s, bool init) {
        bdd::Bdd acc = sem.truth();
        for (const auto& u : s.units) {
            if (init && (u.kind == UnitKind::GuaranteeInit || (u.kind == UnitKind::Guarantee && !has_next(u.formula))))
                acc &= sem.encode(u.formula);
            if (!init && u.kind == UnitKind::Guarantee) acc &= sem.step(u);
        }
        return acc;
    };
    if (!sem.implies(side(spec, true), side(spec_prime, true))) return false;
    if (!sem.implies(side(spec, false), side(spec_prime, false))) return false;
    for (const auto& j2 : spec_prime.units) {
        if (j2.kind != UnitKind::GuaranteeJustice) continue;
        bool covered = sem.valid(j2.formula);
        for (const auto& j1 : spec.units)
            if (j1.kind == UnitKind::GuaranteeJustice && sem.implies(j1.formula, j2.formula)) covered = true;
        if (!covered) return false;
    }
    return true;
}

SoundnessReport verify_soundness(const Spec& spec, const Spec& spec_prime, const Controller& ctrl, TraceView tr) {
    SoundnessReport r;
    const Verdict v = check_step(tr, spec_prime);
    r.trace_admitted = !v.violated();
    if (!r.trace_admitted) r.notes.push_back("repaired assumptions reject the trace: " + to_string(v));
    r.realizable = ctrl.realizable();
    if (!r.realizable) r.notes.push_back("repaired specification is unrealizable");
    r.assumptions_weakened = assumptions_implied(spec, spec_prime);
    if (!r.assumptions_weakened) r.notes.push_back("original assumptions do not imply the repaired ones");
    r.guarantees_weakened = guarantees_implied(spec, spec_prime);
    if (!r.guarantees_weakened) r.notes.push_back("original guarantees do not imply the repaired ones");

    if (tr.empty() || !r.realizable) return r;
    // Replay the trace to recover history bits, then look for a system
    // completion of the last observation that the repaired shield accepts.
    const Game& g = ctrl.game();
    State prev = 0, cur = ctrl.initial_state(ctrl.pack(tr[0]));
    for (std::size_t i = 1; i < tr.size(); ++i) {
        prev = cur;
        cur = ctrl.successor(cur, ctrl.pack(tr[i]));
    }
    const State sys = g.sys_mask();
    const State base = cur & ~sys;
    State sub = 0;
    for (;;) {
        const State t = base | sub;
        const bool ok = tr.size() == 1 ? g.eval_state(g.theta_s(), t) && ctrl.in_region(t) : ctrl.allowed(prev, t);
        if (ok) {
            r.endpoint_in_region = true;
            break;
        }
        if (sub == sys) break;
        sub = (sub - sys) & sys;
    }
    if (!r.endpoint_in_region) r.notes.push_back("no repaired-shield successor for the last observation");
    return r;
}

RepairOutcome spec_repair(const Spec& spec, TraceView tr, const RepairLimits& limits) {
    auto finish = [&](const Hypothesis& a, const Hypothesis& gh, std::shared_ptr<const Controller> ctrl = nullptr) {
        RepairOutcome out;
        out.assumption_edits = a;
        out.guarantee_edits = gh;
        out.spec_prime = apply(apply(spec, a), gh);
        out.controller = ctrl ? ctrl : std::make_shared<const Controller>(Controller::solve(out.spec_prime, limits.game));
        out.soundness = verify_soundness(spec, out.spec_prime, *out.controller, tr);
        out.diff = unified_diff(print_spec(spec), print_spec(out.spec_prime));
        if (!out.soundness.ok()) {
            std::string why;
            for (const auto& n : out.soundness.notes) why += "\n  " + n;
            throw RepairError("repaired specification failed the soundness checks:" + why);
        }
        return out;
    };

    const std::vector<Hypothesis> cands = weaken_assumptions(spec, tr, limits);
    if (cands.size() == 1 && cands[0].edits.empty()) return finish({}, {});

    std::size_t checks = 0;
    for (const auto& a : cands) {
        if (checks++ >= static_cast<std::size_t>(limits.max_assumption_checks)) break;
        auto ctrl = std::make_shared<const Controller>(Controller::solve(apply(spec, a), limits.game));
        if (ctrl->realizable()) return finish(a, {}, ctrl);
    }

    const Vocabulary vocab = merged_vocabulary(spec, tr, violated_assumptions(spec, tr));
    for (bool critical : {false, true}) {
        int tried = 0;
        for (const auto& a : cands) {
            if (tried++ >= limits.max_assumption_candidates) break;
            const Spec spec_a = apply(spec, a);
            Game g(binarize(spec_a).spec, limits.game);
            std::optional<CounterStrategy> cs;
            try {
                cs = counter_strategy(g);
            } catch (const GameError&) {
            }
            GuaranteeSearch s = weaken_guarantees(spec_a, vocab, cs, critical, limits);
            if (s.result) return finish(a, *s.result);
        }
    }
    throw RepairError("no repair found within " + std::to_string(limits.max_rounds) +
                      " counter-strategy rounds per assumption candidate");
}

}  // namespace gr1shield

#include "hypotheses.hpp"

#include <algorithm>

#include "gr1shield/binarize.hpp"

namespace gr1shield {

std::string_view to_string(Edit::Kind k) {
    switch (k) {
        case Edit::Kind::AddDisjunct: return "add-disjunct";
        case Edit::Kind::StrengthenAntecedent: return "strengthen-antecedent";
        case Edit::Kind::Delete: return "delete";
    }
    return "?";
}

int Hypothesis::cost() const {
    int c = 0;
    for (const auto& e : edits) c += e.cost;
    return c;
}

Spec apply(const Spec& spec, const Hypothesis& h) {
    Spec out = spec;
    for (const auto& e : h.edits) {
        auto it = std::find_if(out.units.begin(), out.units.end(), [&](const Unit& u) { return u.name == e.unit; });
        if (it == out.units.end()) throw RepairError("edit targets unknown unit '" + e.unit + "'");
        if (e.kind == Edit::Kind::Delete) out.units.erase(it);
        else it->formula = e.new_formula;
    }
    return out;
}

Vocabulary violation_vocabulary(const Spec& spec, TraceView tr, const std::vector<std::string>& units,
                                std::size_t step) {
    Vocabulary v;
    auto add = [&](const std::string& name, std::int64_t delta) {
        if (std::find(v.vars.begin(), v.vars.end(), name) != v.vars.end()) return;
        v.vars.push_back(name);
        v.delta.push_back(delta);
    };
    auto change = [&](std::size_t var) -> std::int64_t {
        if (step + 1 >= tr.size()) return 0;
        return tr[step + 1][var] - tr[step][var];
    };
    for (const auto& name : units) {
        const Unit* u = spec.find_unit(name);
        if (!u) continue;
        std::set<std::string> vars = all_vars(u->formula);
        for (std::size_t i = 0; i < spec.vars.size(); ++i)
            if (vars.count(spec.vars[i].name)) add(spec.vars[i].name, change(i));
    }
    for (std::size_t i = 0; i < spec.vars.size(); ++i) {
        const bool changed_into = step > 0 && step < tr.size() && tr[step][i] != tr[step - 1][i];
        if (change(i) != 0 || changed_into) add(spec.vars[i].name, change(i));
    }
    return v;
}

namespace detail {

bool ranked_less(const RankedEdit& a, const RankedEdit& b) {
    return std::tie(a.edit.cost, a.kind_rank, a.edit.unit, a.literal_ids) <
           std::tie(b.edit.cost, b.kind_rank, b.edit.unit, b.literal_ids);
}

bool hypothesis_less(const RankedHypothesis& a, const RankedHypothesis& b) {
    const int ca = a.hyp.cost(), cb = b.hyp.cost();
    if (ca != cb) return ca < cb;
    return a.key < b.key;
}

RankedHypothesis combine(const std::vector<const RankedEdit*>& parts) {
    RankedHypothesis h;
    for (const auto* p : parts) {
        h.hyp.edits.push_back(p->edit);
        h.key.emplace_back(p->edit.cost, p->kind_rank, p->edit.unit, p->literal_ids);
    }
    return h;
}

int delete_cost(const Spec& spec, int max_literals) {
    return std::max<int>(static_cast<int>(BitMap(spec.vars).num_bits()), max_literals + 1);
}

std::vector<FormulaPtr> unit_literals(const Spec& spec, const Unit& unit, const Vocabulary& vocab) {
    const bool assumption = is_assumption(unit.kind);
    const bool transition = has_next(unit.formula) && unit.kind != UnitKind::AssumeInit &&
                            unit.kind != UnitKind::GuaranteeInit;
    const std::set<std::string> own = all_vars(unit.formula);
    std::vector<FormulaPtr> out;
    for (std::size_t k = 0; k < vocab.vars.size(); ++k) {
        const VarDecl* d = spec.find_var(vocab.vars[k]);
        if (!d) continue;
        const bool env = d->owner == Owner::Env;
        // Assumptions only read system variables they already mention, and never under X.
        const bool current_ok = !assumption || env || (transition && own.count(d->name));
        const bool next_ok = transition && (!assumption || env);
        if (!d->is_int) {
            if (current_ok) {
                out.push_back(f::atom(d->name));
                out.push_back(f::negate(f::atom(d->name)));
            }
            if (next_ok) {
                out.push_back(f::next(f::atom(d->name)));
                out.push_back(f::next(f::negate(f::atom(d->name))));
            }
        } else if (next_ok) {
            auto eq = f::next_equals(d->name, d->name, vocab.delta[k]);
            out.push_back(eq);
            out.push_back(f::negate(eq));
        }
    }
    return out;
}

namespace {

FormulaPtr edited(const FormulaPtr& f, Edit::Kind kind, const FormulaPtr& clause) {
    if (kind == Edit::Kind::AddDisjunct) {
        if (f->kind == FormulaKind::Implies) return f::implies(f->kids[0], f::disj(f->kids[1], clause));
        return f::disj(f, clause);
    }
    if (f->kind == FormulaKind::Implies) return f::implies(f::conj(f->kids[0], clause), f->kids[1]);
    return f::implies(clause, f);
}

}  // namespace

std::vector<RankedEdit> unit_edits(const Spec& spec, const Unit& unit, const Vocabulary& vocab, int max_literals,
                                   int del_cost, const std::function<bool(const Edit&)>& keep) {
    const std::vector<FormulaPtr> lits = unit_literals(spec, unit, vocab);
    const bool assumption = is_assumption(unit.kind);
    const Edit::Kind kinds[2] = {
        assumption ? Edit::Kind::AddDisjunct : Edit::Kind::StrengthenAntecedent,
        assumption ? Edit::Kind::StrengthenAntecedent : Edit::Kind::AddDisjunct,
    };
    std::vector<RankedEdit> out;
    auto consider = [&](int rank, Edit::Kind kind, const std::vector<int>& ids) {
        std::vector<FormulaPtr> chosen;
        for (int i : ids) chosen.push_back(lits[i]);
        Edit e;
        e.unit = unit.name;
        e.kind = kind;
        e.literals = chosen;
        e.cost = static_cast<int>(ids.size());
        e.old_formula = unit.formula;
        e.new_formula = edited(unit.formula, kind, f::conj_all(chosen));
        if (keep(e)) out.push_back({std::move(e), rank, ids});
    };
    const int n = static_cast<int>(lits.size());
    for (int rank = 0; rank < 2; ++rank) {
        for (int i = 0; i < n; ++i) {
            if (max_literals >= 1) consider(rank, kinds[rank], {i});
            if (max_literals >= 2)
                for (int j = i + 1; j < n; ++j) {
                    // Two literals on the same variable and step are either redundant or contradictory.
                    if (i / 2 == j / 2) continue;
                    consider(rank, kinds[rank], {i, j});
                }
        }
    }
    Edit del;
    del.unit = unit.name;
    del.kind = Edit::Kind::Delete;
    del.cost = del_cost;
    del.old_formula = unit.formula;
    if (keep(del)) out.push_back({std::move(del), 2, {}});
    std::stable_sort(out.begin(), out.end(), ranked_less);
    return out;
}

}  // namespace detail
}  // namespace gr1shield

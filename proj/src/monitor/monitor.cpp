#include "gr1shield/monitor.hpp"

namespace gr1shield {

std::string to_string(const Verdict& v) {
    switch (v.kind) {
        case Verdict::Kind::Ok: return "ok";
        case Verdict::Kind::Violated: return "violated(" + v.unit + ", " + std::to_string(v.step) + ")";
        case Verdict::Kind::JusticeWarning:
            return "justice-warning(" + v.unit + ", " + std::to_string(v.stale_for) + ")";
    }
    return "?";
}

Monitor::Monitor(const Spec& spec) : spec_(spec) {
    for (std::size_t i = 0; i < spec_.vars.size(); ++i) index_[spec_.vars[i].name] = static_cast<int>(i);
    for (std::size_t i = 0; i < spec_.units.size(); ++i) {
        const Unit& u = spec_.units[i];
        if (!is_assumption(u.kind)) continue;
        Tracked t{i, has_next(u.formula)};
        if (u.kind == UnitKind::AssumeInit) init_.push_back(t);
        else if (u.kind == UnitKind::Assume) safety_.push_back(t);
        else justice_.push_back(t);
        collect_past(u.formula);
    }
    last_sat_.assign(justice_.size(), -1);
}

void Monitor::collect_past(const FormulaPtr& f) {
    for (const auto& k : f->kids) collect_past(k);
    if ((f->kind == FormulaKind::Yesterday || f->kind == FormulaKind::Historically) && !past_slot_.count(f.get())) {
        past_slot_[f.get()] = past_nodes_.size();
        past_nodes_.push_back(f.get());
    }
}

void Monitor::reset() {
    trace_.clear();
    past_values_.clear();
    last_sat_.assign(justice_.size(), -1);
    verdict_ = Verdict{};
}

bool Monitor::eval(const FormulaPtr& f, std::size_t i) const {
    auto value = [&](const std::string& name, std::size_t at) {
        return trace_[at][static_cast<std::size_t>(index_.at(name))];
    };
    switch (f->kind) {
        case FormulaKind::Const: return f->value;
        case FormulaKind::Atom: return value(f->var, i) != 0;
        case FormulaKind::Not: return !eval(f->kids[0], i);
        case FormulaKind::And: return eval(f->kids[0], i) && eval(f->kids[1], i);
        case FormulaKind::Or: return eval(f->kids[0], i) || eval(f->kids[1], i);
        case FormulaKind::Implies: return !eval(f->kids[0], i) || eval(f->kids[1], i);
        case FormulaKind::Next: return eval(f->kids[0], i + 1);
        case FormulaKind::Yesterday:
        case FormulaKind::Historically: return past_values_[i][past_slot_.at(f.get())] != 0;
        case FormulaKind::IntCompare: {
            const std::int64_t v = value(f->var, i);
            switch (f->cmp) {
                case CmpOp::Eq: return v == f->constant;
                case CmpOp::Ne: return v != f->constant;
                case CmpOp::Lt: return v < f->constant;
                case CmpOp::Le: return v <= f->constant;
                case CmpOp::Gt: return v > f->constant;
                case CmpOp::Ge: return v >= f->constant;
            }
            return false;
        }
        case FormulaKind::IntNextEquals: {
            const std::int64_t rhs = f->rhs_var.empty() ? f->constant : value(f->rhs_var, i) + f->constant;
            return value(f->var, i + 1) == rhs;
        }
    }
    return false;
}

void Monitor::record_past(std::size_t i) {
    std::vector<char> row(past_nodes_.size(), 0);
    past_values_.push_back(row);
    for (std::size_t k = 0; k < past_nodes_.size(); ++k) {
        const Formula* n = past_nodes_[k];
        bool v;
        if (n->kind == FormulaKind::Yesterday) v = i > 0 && eval(n->kids[0], i - 1);
        else v = i == 0 || (past_values_[i - 1][k] && eval(n->kids[0], i - 1));
        past_values_[i][k] = v;
    }
}

Verdict Monitor::push(const Assignment& values) {
    if (verdict_.violated()) return verdict_;
    if (values.size() != spec_.vars.size()) throw std::invalid_argument("assignment arity does not match the spec");
    trace_.push_back(values);
    const std::size_t k = trace_.size() - 1;
    record_past(k);

    auto fail = [&](const Tracked& t, std::size_t at) {
        verdict_.kind = Verdict::Kind::Violated;
        verdict_.unit = spec_.units[t.unit].name;
        verdict_.step = at;
        return verdict_;
    };
    // Decisions at index k-1 (units reading the next step) come before index k.
    if (k >= 1) {
        for (const auto& t : init_)
            if (t.has_next && k == 1 && !eval(spec_.units[t.unit].formula, 0)) return fail(t, 0);
        for (const auto& t : safety_)
            if (t.has_next && !eval(spec_.units[t.unit].formula, k - 1)) return fail(t, k - 1);
    }
    if (k == 0)
        for (const auto& t : init_)
            if (!t.has_next && !eval(spec_.units[t.unit].formula, 0)) return fail(t, 0);
    for (const auto& t : safety_)
        if (!t.has_next && !eval(spec_.units[t.unit].formula, k)) return fail(t, k);

    for (std::size_t j = 0; j < justice_.size(); ++j) {
        const Tracked& t = justice_[j];
        if (t.has_next) {
            if (k >= 1 && eval(spec_.units[t.unit].formula, k - 1)) last_sat_[j] = static_cast<std::ptrdiff_t>(k - 1);
        } else if (eval(spec_.units[t.unit].formula, k)) {
            last_sat_[j] = static_cast<std::ptrdiff_t>(k);
        }
    }
    return verdict_;
}

std::vector<Verdict> Monitor::staleness(std::size_t window) const {
    std::vector<Verdict> out;
    for (std::size_t j = 0; j < justice_.size(); ++j) {
        const std::size_t stale = trace_.size() - static_cast<std::size_t>(last_sat_[j] + 1);
        if (stale >= window) {
            Verdict v;
            v.kind = Verdict::Kind::JusticeWarning;
            v.unit = spec_.units[justice_[j].unit].name;
            v.stale_for = stale;
            out.push_back(v);
        }
    }
    return out;
}

Verdict check_step(TraceView tr, const Spec& spec) {
    Monitor m(spec);
    Verdict v;
    for (const auto& a : tr) {
        v = m.push(a);
        if (v.violated()) break;
    }
    return v;
}

std::vector<Verdict> justice_staleness(TraceView tr, const Spec& spec, std::size_t window) {
    if (window == 0) throw std::invalid_argument("staleness window must be at least 1");
    Spec liveness = spec;
    std::erase_if(liveness.units, [](const Unit& u) { return u.kind != UnitKind::AssumeJustice; });
    Monitor m(liveness);
    for (const auto& a : tr) m.push(a);
    return m.staleness(window);
}

}  // namespace gr1shield

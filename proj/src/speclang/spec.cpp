#include "gr1shield/spec.hpp"

#include <set>

namespace gr1shield {

unsigned VarDecl::bits() const {
    if (!is_int) return 1;
    std::int64_t n = count();
    unsigned b = 0;
    while ((std::int64_t{1} << b) < n) ++b;
    return b == 0 ? 1 : b;
}

bool is_assumption(UnitKind k) {
    return k == UnitKind::AssumeInit || k == UnitKind::Assume || k == UnitKind::AssumeJustice;
}

std::string_view keyword(UnitKind k) {
    switch (k) {
        case UnitKind::AssumeInit: return "assume_init";
        case UnitKind::GuaranteeInit: return "guarantee_init";
        case UnitKind::Assume: return "assume";
        case UnitKind::Guarantee: return "guarantee";
        case UnitKind::AssumeJustice: return "assume_justice";
        case UnitKind::GuaranteeJustice: return "guarantee_justice";
    }
    return "?";
}

int Spec::var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return -1;
}

const VarDecl* Spec::find_var(std::string_view name) const {
    int i = var_index(name);
    return i < 0 ? nullptr : &vars[static_cast<std::size_t>(i)];
}

const Unit* Spec::find_unit(std::string_view name) const {
    for (const auto& u : units)
        if (u.name == name) return &u;
    return nullptr;
}

std::vector<const Unit*> Spec::units_of(UnitKind kind) const {
    std::vector<const Unit*> out;
    for (const auto& u : units)
        if (u.kind == kind) out.push_back(&u);
    return out;
}

FormulaPtr Spec::theta(Owner side) const {
    std::vector<FormulaPtr> parts;
    for (const auto* u : units_of(side == Owner::Env ? UnitKind::AssumeInit : UnitKind::GuaranteeInit))
        parts.push_back(u->formula);
    return f::conj_all(parts);
}

bool Spec::is_boolean() const {
    for (const auto& v : vars)
        if (v.is_int) return false;
    return true;
}

bool structurally_equal(const Spec& a, const Spec& b) {
    if (a.vars.size() != b.vars.size() || a.units.size() != b.units.size()) return false;
    for (std::size_t i = 0; i < a.vars.size(); ++i) {
        const auto& x = a.vars[i];
        const auto& y = b.vars[i];
        if (x.name != y.name || x.owner != y.owner || x.is_int != y.is_int) return false;
        if (x.is_int && (x.lo != y.lo || x.hi != y.hi || x.step != y.step)) return false;
    }
    for (std::size_t i = 0; i < a.units.size(); ++i) {
        const auto& x = a.units[i];
        const auto& y = b.units[i];
        if (x.name != y.name || x.kind != y.kind || x.critical != y.critical) return false;
        if (!structurally_equal(x.formula, y.formula)) return false;
    }
    return true;
}

SpecError::SpecError(const std::string& msg, int line, int col)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg : msg),
      line_(line),
      col_(col) {}

namespace {

// Variables read at the current step outside any Y/H.
void present_vars(const FormulaPtr& f, bool under_next, std::set<std::string>& out) {
    switch (f->kind) {
        case FormulaKind::Yesterday:
        case FormulaKind::Historically:
            return;
        case FormulaKind::Next:
            present_vars(f->kids[0], true, out);
            return;
        case FormulaKind::Atom:
        case FormulaKind::IntCompare:
            if (!under_next) out.insert(f->var);
            return;
        case FormulaKind::IntNextEquals:
            if (!under_next && !f->rhs_var.empty()) out.insert(f->rhs_var);
            return;
        default:
            for (const auto& k : f->kids) present_vars(k, under_next, out);
    }
}

void check_types(const Spec& spec, const FormulaPtr& f, std::vector<std::string>& problems) {
    auto need = [&](const std::string& name, bool want_int) {
        const VarDecl* v = spec.find_var(name);
        if (!v) {
            problems.push_back("unknown variable '" + name + "'");
            return;
        }
        if (v->is_int != want_int)
            problems.push_back("variable '" + name + "' used as " + (want_int ? "integer" : "boolean"));
    };
    switch (f->kind) {
        case FormulaKind::Atom: need(f->var, false); break;
        case FormulaKind::IntCompare: need(f->var, true); break;
        case FormulaKind::IntNextEquals:
            need(f->var, true);
            if (!f->rhs_var.empty()) need(f->rhs_var, true);
            break;
        default:
            for (const auto& k : f->kids) check_types(spec, k, problems);
    }
}

}  // namespace

std::vector<Diagnostic> check_wellformed(const Spec& spec) {
    std::vector<Diagnostic> out;
    std::set<std::string> seen_vars;
    for (const auto& v : spec.vars) {
        if (v.name.empty()) out.push_back({"", 0, "variable with empty name"});
        if (!seen_vars.insert(v.name).second) out.push_back({"", 0, "duplicate variable '" + v.name + "'"});
        if (v.is_int) {
            if (v.step < 1) out.push_back({"", 0, "variable '" + v.name + "' has step < 1"});
            else if (v.lo > v.hi) out.push_back({"", 0, "variable '" + v.name + "' has lo > hi"});
            else if ((v.hi - v.lo) % v.step != 0)
                out.push_back({"", 0, "variable '" + v.name + "' range is not a multiple of its step"});
        }
    }

    std::set<std::string> seen_units;
    for (const auto& u : spec.units) {
        auto diag = [&](std::string msg) { out.push_back({u.name, u.line, std::move(msg)}); };
        if (u.name.empty()) diag("unit without a name");
        if (!seen_units.insert(u.name).second) diag("duplicate unit name '" + u.name + "'");
        if (!u.formula) {
            diag("unit without a formula");
            continue;
        }
        std::vector<std::string> problems;
        check_types(spec, u.formula, problems);
        for (auto& p : problems) diag(std::move(p));

        const int xdepth = next_depth(u.formula);
        if (xdepth > 1) diag("X nested under X");
        if (has_next_under_past(u.formula)) diag("X under Y/H");
        if ((u.kind == UnitKind::AssumeInit || u.kind == UnitKind::GuaranteeInit) && xdepth > 0)
            diag("X in an initial condition");
        if (!is_assumption(u.kind) && has_past(u.formula)) diag("Y/H inside a guarantee");

        std::set<std::string> cur, nxt;
        collect_vars(u.formula, cur, nxt);
        auto reads_sys = [&](const std::set<std::string>& names) {
            for (const auto& n : names) {
                const VarDecl* v = spec.find_var(n);
                if (v && v->owner == Owner::Sys) return true;
            }
            return false;
        };
        if (u.kind == UnitKind::AssumeInit && (reads_sys(cur) || reads_sys(nxt)))
            diag("initial assumption reads a system variable");
        if (u.kind == UnitKind::Assume) {
            if (reads_sys(nxt)) diag("assumption reads a system variable under X");
            if (xdepth == 0) {
                std::set<std::string> present;
                present_vars(u.formula, false, present);
                if (reads_sys(present)) diag("state assumption reads a system variable");
            }
        }
        if (u.kind == UnitKind::AssumeJustice && reads_sys(nxt))
            diag("justice assumption reads a system variable under X");
    }
    return out;
}

Evaluator::Evaluator(const Spec& spec) : vars_(spec.vars) {
    for (std::size_t i = 0; i < spec.vars.size(); ++i) index_[spec.vars[i].name] = static_cast<int>(i);
}

int Evaluator::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw SpecError("unknown variable '" + name + "'");
    return it->second;
}

namespace {

bool compare(std::int64_t lhs, CmpOp op, std::int64_t rhs) {
    switch (op) {
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Ne: return lhs != rhs;
        case CmpOp::Lt: return lhs < rhs;
        case CmpOp::Le: return lhs <= rhs;
        case CmpOp::Gt: return lhs > rhs;
        case CmpOp::Ge: return lhs >= rhs;
    }
    return false;
}

}  // namespace

bool Evaluator::eval(const FormulaPtr& f, TraceView trace, std::size_t i) const {
    if (i >= trace.size()) throw std::out_of_range("trace index out of range");
    auto value = [&](const std::string& name, std::size_t at) {
        return trace[at][static_cast<std::size_t>(index_of(name))];
    };
    switch (f->kind) {
        case FormulaKind::Const: return f->value;
        case FormulaKind::Atom: return value(f->var, i) != 0;
        case FormulaKind::Not: return !eval(f->kids[0], trace, i);
        case FormulaKind::And: return eval(f->kids[0], trace, i) && eval(f->kids[1], trace, i);
        case FormulaKind::Or: return eval(f->kids[0], trace, i) || eval(f->kids[1], trace, i);
        case FormulaKind::Implies: return !eval(f->kids[0], trace, i) || eval(f->kids[1], trace, i);
        case FormulaKind::Next:
            if (i + 1 >= trace.size()) throw std::out_of_range("X evaluated at the last trace index");
            return eval(f->kids[0], trace, i + 1);
        case FormulaKind::Yesterday: return i > 0 && eval(f->kids[0], trace, i - 1);
        case FormulaKind::Historically:
            for (std::size_t j = 0; j < i; ++j)
                if (!eval(f->kids[0], trace, j)) return false;
            return true;
        case FormulaKind::IntCompare: return compare(value(f->var, i), f->cmp, f->constant);
        case FormulaKind::IntNextEquals: {
            if (i + 1 >= trace.size()) throw std::out_of_range("X evaluated at the last trace index");
            std::int64_t rhs = f->rhs_var.empty() ? f->constant : value(f->rhs_var, i) + f->constant;
            return value(f->var, i + 1) == rhs;
        }
    }
    return false;
}

bool Evaluator::holds_globally(const FormulaPtr& f, TraceView trace) const {
    return !first_failure(f, trace).has_value();
}

std::optional<std::size_t> Evaluator::first_failure(const FormulaPtr& f, TraceView trace, std::size_t from) const {
    const std::size_t end = admissible_end(f, trace.size());
    for (std::size_t i = from; i < end; ++i)
        if (!eval(f, trace, i)) return i;
    return std::nullopt;
}

}  // namespace gr1shield

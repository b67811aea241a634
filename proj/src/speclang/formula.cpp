#include "gr1shield/formula.hpp"

#include <algorithm>
#include <utility>

namespace gr1shield {

namespace {

FormulaPtr make(FormulaKind kind, std::vector<FormulaPtr> kids) {
    auto node = std::make_shared<Formula>();
    node->kind = kind;
    node->kids = std::move(kids);
    return node;
}

}  // namespace

namespace f {

FormulaPtr constant(bool value) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::Const;
    node->value = value;
    return node;
}

FormulaPtr atom(std::string name) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::Atom;
    node->var = std::move(name);
    return node;
}

FormulaPtr negate(FormulaPtr a) { return make(FormulaKind::Not, {std::move(a)}); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(FormulaKind::And, {std::move(a), std::move(b)}); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make(FormulaKind::Or, {std::move(a), std::move(b)}); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
    return make(FormulaKind::Implies, {std::move(a), std::move(b)});
}
FormulaPtr next(FormulaPtr a) { return make(FormulaKind::Next, {std::move(a)}); }
FormulaPtr yesterday(FormulaPtr a) { return make(FormulaKind::Yesterday, {std::move(a)}); }
FormulaPtr historically(FormulaPtr a) { return make(FormulaKind::Historically, {std::move(a)}); }

FormulaPtr compare(std::string var, CmpOp op, std::int64_t c) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::IntCompare;
    node->var = std::move(var);
    node->cmp = op;
    node->constant = c;
    return node;
}

FormulaPtr next_equals(std::string var, std::string rhs_var, std::int64_t offset) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::IntNextEquals;
    node->var = std::move(var);
    node->rhs_var = std::move(rhs_var);
    node->constant = offset;
    return node;
}

FormulaPtr next_equals_const(std::string var, std::int64_t c) { return next_equals(std::move(var), "", c); }

FormulaPtr conj_all(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) return constant(true);
    FormulaPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
}

FormulaPtr disj_all(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) return constant(false);
    FormulaPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
    return acc;
}

}  // namespace f

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
    switch (a->kind) {
        case FormulaKind::Const:
            if (a->value != b->value) return false;
            break;
        case FormulaKind::Atom:
            if (a->var != b->var) return false;
            break;
        case FormulaKind::IntCompare:
            if (a->var != b->var || a->cmp != b->cmp || a->constant != b->constant) return false;
            break;
        case FormulaKind::IntNextEquals:
            if (a->var != b->var || a->rhs_var != b->rhs_var || a->constant != b->constant) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!structurally_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

int next_depth(const FormulaPtr& f) {
    int best = 0;
    for (const auto& k : f->kids) best = std::max(best, next_depth(k));
    if (f->kind == FormulaKind::Next || f->kind == FormulaKind::IntNextEquals) return best + 1;
    return best;
}

int past_depth(const FormulaPtr& f) {
    int best = 0;
    for (const auto& k : f->kids) best = std::max(best, past_depth(k));
    if (f->kind == FormulaKind::Yesterday || f->kind == FormulaKind::Historically) return best + 1;
    return best;
}

bool has_next(const FormulaPtr& f) { return next_depth(f) > 0; }
bool has_past(const FormulaPtr& f) { return past_depth(f) > 0; }

bool has_next_under_past(const FormulaPtr& f) {
    if (f->kind == FormulaKind::Yesterday || f->kind == FormulaKind::Historically) return has_next(f->kids[0]);
    return std::any_of(f->kids.begin(), f->kids.end(), [](const FormulaPtr& k) { return has_next_under_past(k); });
}

namespace {

void collect(const FormulaPtr& f, bool under_next, std::set<std::string>& cur, std::set<std::string>& nxt) {
    switch (f->kind) {
        case FormulaKind::Atom:
        case FormulaKind::IntCompare:
            (under_next ? nxt : cur).insert(f->var);
            return;
        case FormulaKind::IntNextEquals:
            nxt.insert(f->var);
            if (!f->rhs_var.empty()) (under_next ? nxt : cur).insert(f->rhs_var);
            return;
        case FormulaKind::Next:
            collect(f->kids[0], true, cur, nxt);
            return;
        default:
            for (const auto& k : f->kids) collect(k, under_next, cur, nxt);
    }
}

}  // namespace

void collect_vars(const FormulaPtr& f, std::set<std::string>& current_vars, std::set<std::string>& next_vars) {
    collect(f, false, current_vars, next_vars);
}

std::set<std::string> all_vars(const FormulaPtr& f) {
    std::set<std::string> cur, nxt;
    collect_vars(f, cur, nxt);
    cur.insert(nxt.begin(), nxt.end());
    return cur;
}

std::string to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

}  // namespace gr1shield

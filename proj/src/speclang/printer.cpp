#include <algorithm>
#include <sstream>

#include "gr1shield/spec.hpp"

namespace gr1shield {

namespace {

int precedence(const FormulaPtr& f) {
    switch (f->kind) {
        case FormulaKind::Implies: return 1;
        case FormulaKind::Or: return 2;
        case FormulaKind::And: return 3;
        case FormulaKind::Not: return 4;
        default: return 5;
    }
}

void print(const FormulaPtr& f, std::ostream& os);

void print_child(const FormulaPtr& child, bool parens, std::ostream& os) {
    if (parens) os << '(';
    print(child, os);
    if (parens) os << ')';
}

void print(const FormulaPtr& f, std::ostream& os) {
    const int p = precedence(f);
    switch (f->kind) {
        case FormulaKind::Const: os << (f->value ? "true" : "false"); return;
        case FormulaKind::Atom: os << f->var; return;
        case FormulaKind::Not:
            os << '!';
            print_child(f->kids[0], precedence(f->kids[0]) < p, os);
            return;
        case FormulaKind::And:
        case FormulaKind::Or:
            print_child(f->kids[0], precedence(f->kids[0]) < p, os);
            os << (f->kind == FormulaKind::And ? " && " : " || ");
            print_child(f->kids[1], precedence(f->kids[1]) <= p, os);
            return;
        case FormulaKind::Implies:
            print_child(f->kids[0], precedence(f->kids[0]) <= p, os);
            os << " -> ";
            print_child(f->kids[1], false, os);
            return;
        case FormulaKind::Next:
        case FormulaKind::Yesterday:
        case FormulaKind::Historically:
            os << (f->kind == FormulaKind::Next ? "X(" : f->kind == FormulaKind::Yesterday ? "Y(" : "H(");
            print(f->kids[0], os);
            os << ')';
            return;
        case FormulaKind::IntCompare: os << f->var << ' ' << to_string(f->cmp) << ' ' << f->constant; return;
        case FormulaKind::IntNextEquals:
            os << "X(" << f->var << ") = ";
            if (f->rhs_var.empty()) {
                os << f->constant;
            } else {
                os << f->rhs_var;
                if (f->constant > 0) os << " + " << f->constant;
                if (f->constant < 0) os << " - " << -f->constant;
            }
            return;
    }
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print(f, os);
    return os.str();
}

std::string print_spec(const Spec& spec) {
    std::ostringstream os;
    for (const auto& v : spec.vars) {
        os << (v.owner == Owner::Env ? "env " : "sys ");
        if (v.is_int) {
            os << "int " << v.name << ' ' << v.lo << ".." << v.hi;
            if (v.step != 1) os << " step " << v.step;
        } else {
            os << "bool " << v.name;
        }
        os << '\n';
    }
    std::vector<const Unit*> order;
    for (const auto& u : spec.units) order.push_back(&u);
    std::stable_sort(order.begin(), order.end(), [](const Unit* a, const Unit* b) {
        return static_cast<int>(a->kind) < static_cast<int>(b->kind);
    });
    if (!order.empty()) os << '\n';
    for (const Unit* u : order) {
        os << keyword(u->kind) << ' ';
        if (u->critical) os << "critical ";
        os << u->name << ": " << print_formula(u->formula) << '\n';
    }
    return os.str();
}

}  // namespace gr1shield

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gr1shield/spec.hpp"

namespace gentest {

using namespace gr1shield;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng);
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(range(0, static_cast<std::int64_t>(n) - 1)); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng); }
    template <class T>
    const T& pick(const std::vector<T>& xs) { return xs[index(xs.size())]; }
};

struct FormulaOptions {
    int depth = 3;
    bool allow_next = false;
    /// Variables allowed under X; empty means all.
    std::vector<std::string> next_vars;
    bool allow_past = false;
    bool allow_int = true;
};

inline std::int64_t domain_value(Rng& rng, const VarDecl& v) {
    return v.lo + v.step * rng.range(0, v.count() - 1);
}

inline FormulaPtr random_leaf(Rng& rng, const std::vector<VarDecl>& vars, const FormulaOptions& o,
                              bool under_next) {
    std::vector<const VarDecl*> pool;
    for (const auto& v : vars) {
        if (under_next && !o.next_vars.empty() &&
            std::find(o.next_vars.begin(), o.next_vars.end(), v.name) == o.next_vars.end())
            continue;
        if (v.is_int && !o.allow_int) continue;
        pool.push_back(&v);
    }
    if (pool.empty() || rng.coin(0.05)) return f::constant(rng.coin());
    const VarDecl& v = *pool[rng.index(pool.size())];
    if (!v.is_int) return f::atom(v.name);
    static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
    return f::compare(v.name, ops[rng.index(6)], domain_value(rng, v));
}

inline FormulaPtr random_formula(Rng& rng, const std::vector<VarDecl>& vars, const FormulaOptions& o,
                                 int depth, bool under_next = false, bool under_past = false) {
    if (depth <= 0 || rng.coin(0.25)) {
        FormulaPtr leaf = random_leaf(rng, vars, o, under_next);
        if (o.allow_next && !under_next && !under_past && rng.coin(0.3)) {
            FormulaPtr nl = random_leaf(rng, vars, o, true);
            if (nl->kind == FormulaKind::IntCompare && rng.coin(0.5)) {
                const VarDecl* v = nullptr;
                for (const auto& d : vars)
                    if (d.name == nl->var) v = &d;
                return f::next_equals(v->name, v->name, v->step * rng.range(-2, 2));
            }
            return f::next(nl);
        }
        return leaf;
    }
    int choice = static_cast<int>(rng.range(0, 9));
    auto sub = [&](bool nx = false, bool past = false) {
        return random_formula(rng, vars, o, depth - 1, under_next || nx, under_past || past);
    };
    switch (choice) {
        case 0:
        case 1: return f::negate(sub());
        case 2:
        case 3: return f::conj(sub(), sub());
        case 4:
        case 5: return f::disj(sub(), sub());
        case 6: return f::implies(sub(), sub());
        case 7:
            if (o.allow_next && !under_next && !under_past) return f::next(sub(true));
            return f::conj(sub(), sub());
        case 8:
            if (o.allow_past && !under_next) return f::yesterday(sub(false, true));
            return f::negate(sub());
        default:
            if (o.allow_past && !under_next) return f::historically(sub(false, true));
            return f::disj(sub(), sub());
    }
}

inline std::vector<std::string> names_of(const std::vector<VarDecl>& vars, Owner owner) {
    std::vector<std::string> out;
    for (const auto& v : vars)
        if (v.owner == owner) out.push_back(v.name);
    return out;
}

inline std::vector<VarDecl> only(const std::vector<VarDecl>& vars, Owner owner) {
    std::vector<VarDecl> out;
    for (const auto& v : vars)
        if (v.owner == owner) out.push_back(v);
    return out;
}

struct SpecOptions {
    int env_vars = 2;
    int sys_vars = 2;
    bool ints = false;
    bool past = false;
    int max_safety = 2;
    int max_justice = 2;
    int depth = 2;
};

/// Well-formed random spec; unit kinds and variables are drawn per options.
inline Spec random_spec(Rng& rng, const SpecOptions& o) {
    Spec s;
    for (int i = 0; i < o.env_vars; ++i) {
        std::string n = "e" + std::to_string(i);
        if (o.ints && rng.coin(0.4)) {
            std::int64_t step = rng.range(1, 3);
            std::int64_t lo = rng.range(-3, 3);
            s.vars.push_back(VarDecl::integer(n, Owner::Env, lo, lo + step * rng.range(1, 6), step));
        } else {
            s.vars.push_back(VarDecl::boolean(n, Owner::Env));
        }
    }
    for (int i = 0; i < o.sys_vars; ++i) {
        std::string n = "s" + std::to_string(i);
        if (o.ints && rng.coin(0.3))
            s.vars.push_back(VarDecl::integer(n, Owner::Sys, 0, rng.range(1, 5)));
        else
            s.vars.push_back(VarDecl::boolean(n, Owner::Sys));
    }
    const auto env = only(s.vars, Owner::Env);
    const auto env_names = names_of(s.vars, Owner::Env);
    int counter = 0;
    auto add = [&](UnitKind kind, FormulaPtr fm) {
        Unit u;
        u.name = "u" + std::to_string(counter++);
        u.kind = kind;
        u.formula = std::move(fm);
        u.critical = kind == UnitKind::Guarantee && rng.coin(0.2);
        s.units.push_back(u);
        if (!check_wellformed(s).empty()) s.units.pop_back();
    };
    FormulaOptions fo;
    fo.depth = o.depth;
    fo.allow_int = o.ints;
    if (rng.coin(0.5)) add(UnitKind::AssumeInit, random_formula(rng, env, fo, o.depth));
    if (rng.coin(0.5)) add(UnitKind::GuaranteeInit, random_formula(rng, s.vars, fo, o.depth));
    for (int i = 0, n = static_cast<int>(rng.range(0, o.max_safety)); i < n; ++i) {
        FormulaOptions ao = fo;
        ao.allow_next = true;
        ao.next_vars = env_names;
        ao.allow_past = o.past;
        add(UnitKind::Assume, random_formula(rng, s.vars, ao, o.depth));
    }
    for (int i = 0, n = static_cast<int>(rng.range(0, o.max_safety)); i < n; ++i) {
        FormulaOptions go = fo;
        go.allow_next = true;
        add(UnitKind::Guarantee, random_formula(rng, s.vars, go, o.depth));
    }
    for (int i = 0, n = static_cast<int>(rng.range(0, o.max_justice)); i < n; ++i)
        add(UnitKind::AssumeJustice, random_formula(rng, s.vars, fo, o.depth));
    for (int i = 0, n = static_cast<int>(rng.range(0, o.max_justice)); i < n; ++i)
        add(UnitKind::GuaranteeJustice, random_formula(rng, s.vars, fo, o.depth));
    return s;
}

inline Assignment random_assignment(Rng& rng, const Spec& s) {
    Assignment a;
    for (const auto& v : s.vars) a.push_back(domain_value(rng, v));
    return a;
}

inline std::vector<Assignment> random_trace(Rng& rng, const Spec& s, std::size_t len) {
    std::vector<Assignment> tr;
    for (std::size_t i = 0; i < len; ++i) tr.push_back(random_assignment(rng, s));
    return tr;
}

}  // namespace gentest

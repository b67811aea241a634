#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gr1shield/spec.hpp"

namespace oracle {

using namespace gr1shield;

inline std::int64_t lookup(const Spec& s, const std::vector<Assignment>& tr, const std::string& name, std::size_t i) {
    for (std::size_t k = 0; k < s.vars.size(); ++k)
        if (s.vars[k].name == name) return tr[i][k];
    throw std::logic_error("unknown variable " + name);
}

inline bool cmp(std::int64_t a, CmpOp op, std::int64_t b) {
    switch (op) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
    }
    return false;
}

/// Direct recursive evaluation over the whole trace (Y/H recomputed from scratch).
inline bool eval(const Spec& s, const FormulaPtr& f, const std::vector<Assignment>& tr, std::size_t i) {
    switch (f->kind) {
        case FormulaKind::Const: return f->value;
        case FormulaKind::Atom: return lookup(s, tr, f->var, i) != 0;
        case FormulaKind::Not: return !eval(s, f->kids[0], tr, i);
        case FormulaKind::And: return eval(s, f->kids[0], tr, i) && eval(s, f->kids[1], tr, i);
        case FormulaKind::Or: return eval(s, f->kids[0], tr, i) || eval(s, f->kids[1], tr, i);
        case FormulaKind::Implies: return !eval(s, f->kids[0], tr, i) || eval(s, f->kids[1], tr, i);
        case FormulaKind::Next:
            if (i + 1 >= tr.size()) throw std::out_of_range("X at end");
            return eval(s, f->kids[0], tr, i + 1);
        case FormulaKind::Yesterday: return i > 0 && eval(s, f->kids[0], tr, i - 1);
        case FormulaKind::Historically:
            for (std::size_t j = 0; j < i; ++j)
                if (!eval(s, f->kids[0], tr, j)) return false;
            return true;
        case FormulaKind::IntCompare: return cmp(lookup(s, tr, f->var, i), f->cmp, f->constant);
        case FormulaKind::IntNextEquals: {
            if (i + 1 >= tr.size()) throw std::out_of_range("X at end");
            std::int64_t rhs = f->constant + (f->rhs_var.empty() ? 0 : lookup(s, tr, f->rhs_var, i));
            return lookup(s, tr, f->var, i + 1) == rhs;
        }
    }
    return false;
}

inline bool mentions_next(const FormulaPtr& f) {
    if (f->kind == FormulaKind::Next || f->kind == FormulaKind::IntNextEquals) return true;
    for (const auto& k : f->kids)
        if (mentions_next(k)) return true;
    return false;
}

/// Index of the first failing step of a G-wrapped unit, or -1.
inline long first_failure(const Spec& s, const FormulaPtr& f, const std::vector<Assignment>& tr) {
    std::size_t end = mentions_next(f) ? (tr.empty() ? 0 : tr.size() - 1) : tr.size();
    for (std::size_t i = 0; i < end; ++i)
        if (!eval(s, f, tr, i)) return static_cast<long>(i);
    return -1;
}

/// Explicit GR(1) game over the valuations of a Boolean spec without past
/// operators. Bit b of a state is variable b. Positions carry two justice
/// counters; the condition GF(env counter wraps) -> GF(sys counter wraps)
/// is a three-priority parity objective solved by enumerating nested
/// fixpoints over explicit position sets.
class BruteGame {
public:
    explicit BruteGame(const Spec& s) : s_(s), n_(static_cast<unsigned>(s.vars.size())) {
        for (const auto& u : s.units) {
            if (u.kind == UnitKind::Assume) assume_.push_back(u.formula);
            if (u.kind == UnitKind::Guarantee) guar_.push_back(u.formula);
            if (u.kind == UnitKind::AssumeJustice) je_.push_back(u.formula);
            if (u.kind == UnitKind::GuaranteeJustice) js_.push_back(u.formula);
        }
        if (je_.empty()) je_.push_back(f::constant(true));
        if (js_.empty()) js_.push_back(f::constant(true));
        for (unsigned b = 0; b < n_; ++b) (s.vars[b].owner == Owner::Env ? env_bits_ : sys_bits_).push_back(b);
    }

    Assignment unpack(std::uint64_t st) const {
        Assignment a(n_);
        for (unsigned b = 0; b < n_; ++b) a[b] = (st >> b) & 1;
        return a;
    }

    /// A G-unit on the pair (s, t); units without X constrain t.
    bool unit_pair(const FormulaPtr& f, std::uint64_t a, std::uint64_t b) const {
        std::vector<Assignment> tr{unpack(a), unpack(b)};
        return mentions_next(f) ? eval(s_, f, tr, 0) : eval(s_, f, tr, 1);
    }
    bool rho(const std::vector<FormulaPtr>& units, std::uint64_t a, std::uint64_t b) const {
        for (const auto& f : units)
            if (!unit_pair(f, a, b)) return false;
        return true;
    }
    bool state_sat(const FormulaPtr& f, std::uint64_t a) const {
        std::vector<Assignment> tr{unpack(a)};
        return eval(s_, f, tr, 0);
    }

    std::uint64_t compose(std::uint64_t envv, std::uint64_t sysv) const {
        std::uint64_t st = 0;
        for (std::size_t i = 0; i < env_bits_.size(); ++i) st |= ((envv >> i) & 1) << env_bits_[i];
        for (std::size_t i = 0; i < sys_bits_.size(); ++i) st |= ((sysv >> i) & 1) << sys_bits_[i];
        return st;
    }

    std::size_t pos(std::uint64_t st, std::size_t ce, std::size_t cs) const {
        return (st * je_.size() + ce) * js_.size() + cs;
    }

    /// Winning flag for each valuation.
    std::vector<bool> solve() {
        const std::size_t ne = je_.size(), ns = js_.size();
        const std::size_t states = std::size_t{1} << n_;
        const std::size_t npos = states * ne * ns;
        priority_.assign(npos, 0);
        next_counters_.assign(npos, {0, 0});
        for (std::uint64_t st = 0; st < states; ++st)
            for (std::size_t ce = 0; ce < ne; ++ce)
                for (std::size_t cs = 0; cs < ns; ++cs) {
                    bool e_hit = state_sat(je_[ce], st), s_hit = state_sat(js_[cs], st);
                    std::size_t p = pos(st, ce, cs);
                    bool s_wrap = s_hit && cs + 1 == ns, e_wrap = e_hit && ce + 1 == ne;
                    priority_[p] = s_wrap ? 2 : e_wrap ? 1 : 0;
                    next_counters_[p] = {e_hit ? (ce + 1) % ne : ce, s_hit ? (cs + 1) % ns : cs};
                }
        // Successor lists: for each env choice, the positions the system may pick.
        moves_.assign(npos, {});
        const std::uint64_t env_count = std::uint64_t{1} << env_bits_.size();
        const std::uint64_t sys_count = std::uint64_t{1} << sys_bits_.size();
        for (std::uint64_t st = 0; st < states; ++st)
            for (std::uint64_t xe = 0; xe < env_count; ++xe) {
                std::vector<std::uint64_t> targets;
                bool env_ok = false;
                for (std::uint64_t ys = 0; ys < sys_count; ++ys) {
                    std::uint64_t t = compose(xe, ys);
                    if (!rho(assume_, st, t)) continue;
                    env_ok = true;
                    if (rho(guar_, st, t)) targets.push_back(t);
                }
                if (!env_ok) continue;
                for (std::size_t ce = 0; ce < ne; ++ce)
                    for (std::size_t cs = 0; cs < ns; ++cs) {
                        std::size_t p = pos(st, ce, cs);
                        auto [ce2, cs2] = next_counters_[p];
                        std::vector<std::size_t> succ;
                        for (auto t : targets) succ.push_back(pos(t, ce2, cs2));
                        moves_[p].push_back(std::move(succ));
                    }
            }
        std::vector<char> z(npos, 1);
        while (true) {
            std::vector<char> y(npos, 0);
            while (true) {
                std::vector<char> x(npos, 1);
                while (true) {
                    std::vector<char> nx(npos, 0);
                    for (std::size_t p = 0; p < npos; ++p) {
                        const auto& target = priority_[p] == 2 ? z : priority_[p] == 1 ? y : x;
                        nx[p] = cpre(p, target);
                    }
                    if (nx == x) break;
                    x = nx;
                }
                if (x == y) break;
                y = x;
            }
            if (y == z) break;
            z = y;
        }
        std::vector<bool> out(states);
        for (std::uint64_t st = 0; st < states; ++st) out[st] = z[pos(st, 0, 0)];
        return out;
    }

private:
    bool cpre(std::size_t p, const std::vector<char>& target) const {
        for (const auto& succ : moves_[p]) {
            bool any = false;
            for (auto q : succ)
                if (target[q]) {
                    any = true;
                    break;
                }
            if (!any) return false;
        }
        return true;
    }

    const Spec& s_;
    unsigned n_;
    std::vector<FormulaPtr> assume_, guar_, je_, js_;
    std::vector<unsigned> env_bits_, sys_bits_;
    std::vector<int> priority_;
    std::vector<std::pair<std::size_t, std::size_t>> next_counters_;
    std::vector<std::vector<std::vector<std::size_t>>> moves_;
};

}  // namespace oracle

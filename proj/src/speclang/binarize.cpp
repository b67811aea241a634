#include "gr1shield/binarize.hpp"

#include <algorithm>
#include <set>

namespace gr1shield {

BitMap::BitMap(const std::vector<VarDecl>& source_vars) : source_(source_vars) {
    for (const auto& v : source_) {
        offset_.push_back(num_bits_);
        num_bits_ += v.bits();
    }
}

std::vector<std::string> BitMap::bit_names(std::size_t i) const {
    const VarDecl& v = source_[i];
    if (!v.is_int) return {v.name};
    std::vector<std::string> out;
    for (unsigned b = 0; b < v.bits(); ++b) out.push_back(v.name + std::to_string(b));
    return out;
}

void BitMap::encode_value(std::size_t var, std::int64_t value, Assignment& bits) const {
    const VarDecl& v = source_[var];
    if (!v.contains(value))
        throw SpecError("value " + std::to_string(value) + " outside the domain of '" + v.name + "'");
    const std::int64_t code = v.is_int ? (value - v.lo) / v.step : value;
    for (unsigned b = 0; b < v.bits(); ++b) bits[offset_[var] + b] = (code >> b) & 1;
}

std::int64_t BitMap::decode_value(std::size_t var, const Assignment& bits) const {
    const VarDecl& v = source_[var];
    std::int64_t code = 0;
    for (unsigned b = 0; b < v.bits(); ++b)
        if (bits[offset_[var] + b]) code |= std::int64_t{1} << b;
    if (code >= v.count()) throw SpecError("bit code " + std::to_string(code) + " outside the domain of '" + v.name + "'");
    return v.is_int ? v.lo + code * v.step : code;
}

Assignment BitMap::encode(const Assignment& source) const {
    Assignment bits(num_bits_, 0);
    for (std::size_t i = 0; i < source_.size(); ++i) encode_value(i, source[i], bits);
    return bits;
}

Assignment BitMap::decode(const Assignment& bits) const {
    Assignment out(source_.size(), 0);
    for (std::size_t i = 0; i < source_.size(); ++i) out[i] = decode_value(i, bits);
    return out;
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

std::vector<std::int64_t> domain(const VarDecl& v) {
    std::vector<std::int64_t> out;
    for (std::int64_t x = v.lo; x <= v.hi; x += v.step) out.push_back(x);
    return out;
}

/// Conjunction of bit literals fixing `v` to `value`.
FormulaPtr code_of(const VarDecl& v, std::int64_t value) {
    const std::int64_t code = (value - v.lo) / v.step;
    std::vector<FormulaPtr> lits;
    for (unsigned b = 0; b < v.bits(); ++b) {
        FormulaPtr a = f::atom(v.name + std::to_string(b));
        lits.push_back((code >> b) & 1 ? a : f::negate(a));
    }
    return f::conj_all(lits);
}

const VarDecl& int_var(const Spec& s, const std::string& name) {
    const VarDecl* v = s.find_var(name);
    if (!v || !v->is_int) throw SpecError("'" + name + "' is not an integer variable");
    return *v;
}

}  // namespace

FormulaPtr binarize_formula(const FormulaPtr& fm, const Spec& source) {
    switch (fm->kind) {
        case FormulaKind::Const:
        case FormulaKind::Atom:
            return fm;
        case FormulaKind::IntCompare: {
            const VarDecl& v = int_var(source, fm->var);
            if ((fm->cmp == CmpOp::Eq || fm->cmp == CmpOp::Ne) && !v.contains(fm->constant))
                throw SpecError("constant " + std::to_string(fm->constant) + " outside the domain of '" + v.name + "'");
            std::vector<FormulaPtr> parts;
            for (std::int64_t d : domain(v)) {
                if (compare(d, fm->cmp, fm->constant)) parts.push_back(code_of(v, d));
            }
            if (parts.empty()) return f::constant(false);
            return f::disj_all(parts);
        }
        case FormulaKind::IntNextEquals: {
            const VarDecl& v = int_var(source, fm->var);
            if (fm->rhs_var.empty()) {
                if (!v.contains(fm->constant))
                    throw SpecError("constant " + std::to_string(fm->constant) + " outside the domain of '" + v.name + "'");
                return f::next(code_of(v, fm->constant));
            }
            const VarDecl& r = int_var(source, fm->rhs_var);
            std::vector<FormulaPtr> parts;
            for (std::int64_t d : domain(r))
                if (v.contains(d + fm->constant)) parts.push_back(f::conj(code_of(r, d), f::next(code_of(v, d + fm->constant))));
            if (parts.empty())
                throw SpecError("no value pair satisfies " + print_formula(fm));
            return f::disj_all(parts);
        }
        default: {
            auto node = std::make_shared<Formula>(*fm);
            for (auto& k : node->kids) k = binarize_formula(k, source);
            return node;
        }
    }
}

Binarized binarize(const Spec& spec) {
    Binarized out;
    out.map = BitMap(spec.vars);
    std::set<std::string> names;
    for (const auto& v : spec.vars)
        if (!v.is_int) names.insert(v.name);
    for (std::size_t i = 0; i < spec.vars.size(); ++i) {
        const VarDecl& v = spec.vars[i];
        if (!v.is_int) {
            out.spec.vars.push_back(v);
            continue;
        }
        for (const auto& bit : out.map.bit_names(i)) {
            if (!names.insert(bit).second) throw SpecError("bit name '" + bit + "' clashes with another variable");
            out.spec.vars.push_back(VarDecl::boolean(bit, v.owner));
        }
    }

    for (const auto& u : spec.units) {
        Unit b = u;
        b.formula = binarize_formula(u.formula, spec);
        out.spec.units.push_back(std::move(b));
    }

    for (const auto& v : spec.vars) {
        if (!v.is_int || v.count() == (std::int64_t{1} << v.bits())) continue;
        std::vector<FormulaPtr> parts;
        for (std::int64_t d : domain(v)) parts.push_back(code_of(v, d));
        Unit dom;
        dom.name = v.name + "_domain";
        while (spec.find_unit(dom.name)) dom.name += "_";
        dom.kind = v.owner == Owner::Env ? UnitKind::Assume : UnitKind::Guarantee;
        dom.formula = f::disj_all(parts);
        dom.generated = true;
        out.spec.units.push_back(std::move(dom));
    }
    std::stable_sort(out.spec.units.begin(), out.spec.units.end(), [](const Unit& a, const Unit& b) {
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return out;
}

}  // namespace gr1shield

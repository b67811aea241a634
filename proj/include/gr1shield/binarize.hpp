#pragma once

#include <string>
#include <vector>

#include "gr1shield/spec.hpp"

namespace gr1shield {

/// Correspondence between a source spec's variables and the Boolean
/// variables of its binarized form. Integer variables use ceil(log2(count))
/// bits named `<var>0`, `<var>1`, ... (least significant first) holding the
/// code (value - lo) / step.
class BitMap {
public:
    BitMap() = default;
    explicit BitMap(const std::vector<VarDecl>& source_vars);

    const std::vector<VarDecl>& source_vars() const { return source_; }
    std::size_t num_bits() const { return num_bits_; }
    /// First binary variable index used by source variable i.
    std::size_t offset(std::size_t i) const { return offset_[i]; }
    std::size_t width(std::size_t i) const { return source_[i].bits(); }
    std::vector<std::string> bit_names(std::size_t i) const;

    /// Source assignment to 0/1 bits. Throws SpecError on out-of-domain values.
    Assignment encode(const Assignment& source) const;
    /// Bits back to source values. Throws SpecError on codes outside the domain.
    Assignment decode(const Assignment& bits) const;
    void encode_value(std::size_t var, std::int64_t value, Assignment& bits) const;
    std::int64_t decode_value(std::size_t var, const Assignment& bits) const;

private:
    std::vector<VarDecl> source_;
    std::vector<std::size_t> offset_;
    std::size_t num_bits_ = 0;
};

struct Binarized {
    Spec spec;
    BitMap map;
};

/// Rewrites integer variables into Boolean bits. Comparisons become
/// disjunctions over matching codes; domains that do not fill their bit
/// width get a generated `<var>_domain` unit (an assumption for env
/// variables, a guarantee for sys variables).
Binarized binarize(const Spec& spec);

/// Translates one formula over the source variables to the binary variables.
FormulaPtr binarize_formula(const FormulaPtr& f, const Spec& source);

}  // namespace gr1shield

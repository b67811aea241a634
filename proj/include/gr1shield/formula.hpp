#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace gr1shield {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

enum class FormulaKind {
    Const,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,
    Yesterday,
    Historically,
    IntCompare,     // var <op> constant
    IntNextEquals,  // X(var) = rhs_var + constant, or X(var) = constant when rhs_var is empty
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula node. Nodes are shared between specs, so never mutate one
/// after construction; build new trees with the factories below.
struct Formula {
    FormulaKind kind = FormulaKind::Const;
    bool value = false;
    std::string var;
    CmpOp cmp = CmpOp::Eq;
    std::int64_t constant = 0;
    std::string rhs_var;
    std::vector<FormulaPtr> kids;
};

namespace f {

FormulaPtr constant(bool value);
FormulaPtr atom(std::string name);
FormulaPtr negate(FormulaPtr a);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr next(FormulaPtr a);
FormulaPtr yesterday(FormulaPtr a);
FormulaPtr historically(FormulaPtr a);
FormulaPtr compare(std::string var, CmpOp op, std::int64_t c);
FormulaPtr next_equals(std::string var, std::string rhs_var, std::int64_t offset);
FormulaPtr next_equals_const(std::string var, std::int64_t c);

/// Left-folded conjunction/disjunction; empty input yields true/false.
FormulaPtr conj_all(const std::vector<FormulaPtr>& parts);
FormulaPtr disj_all(const std::vector<FormulaPtr>& parts);

}  // namespace f

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Maximum nesting depth of X.
int next_depth(const FormulaPtr& f);
/// Maximum nesting depth of Y/H.
int past_depth(const FormulaPtr& f);
bool has_next(const FormulaPtr& f);
bool has_past(const FormulaPtr& f);
/// X appearing anywhere underneath a Y or H.
bool has_next_under_past(const FormulaPtr& f);

/// Variables read at the current step and under X respectively.
/// IntNextEquals contributes its lhs to `next_vars` and its rhs to `current_vars`.
void collect_vars(const FormulaPtr& f, std::set<std::string>& current_vars,
                  std::set<std::string>& next_vars);
std::set<std::string> all_vars(const FormulaPtr& f);

std::string to_string(CmpOp op);

}  // namespace gr1shield

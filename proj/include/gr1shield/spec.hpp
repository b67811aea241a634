#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gr1shield/formula.hpp"

namespace gr1shield {

enum class Owner { Env, Sys };

struct VarDecl {
    std::string name;
    Owner owner = Owner::Env;
    bool is_int = false;
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    std::int64_t step = 1;

    /// Number of values in the domain.
    std::int64_t count() const { return is_int ? (hi - lo) / step + 1 : 2; }
    /// Bits needed to encode the domain (1 for Booleans).
    unsigned bits() const;
    bool contains(std::int64_t v) const {
        return v >= lo && v <= hi && (v - lo) % step == 0;
    }

    static VarDecl boolean(std::string name, Owner owner) { return {std::move(name), owner, false, 0, 1, 1}; }
    static VarDecl integer(std::string name, Owner owner, std::int64_t lo, std::int64_t hi, std::int64_t step = 1) {
        return {std::move(name), owner, true, lo, hi, step};
    }
};

enum class UnitKind { AssumeInit, GuaranteeInit, Assume, Guarantee, AssumeJustice, GuaranteeJustice };

bool is_assumption(UnitKind k);
std::string_view keyword(UnitKind k);

/// A named specification unit. Transition units are implicitly wrapped in G,
/// justice units in GF.
struct Unit {
    std::string name;
    UnitKind kind = UnitKind::Assume;
    FormulaPtr formula;
    bool critical = false;
    /// Added by a transformation (binarize domain constraints); never repaired.
    bool generated = false;
    int line = 0;
};

struct Spec {
    std::vector<VarDecl> vars;
    std::vector<Unit> units;

    int var_index(std::string_view name) const;
    const VarDecl* find_var(std::string_view name) const;
    const Unit* find_unit(std::string_view name) const;
    std::vector<const Unit*> units_of(UnitKind kind) const;
    /// Conjunction of the init units of one side (true if none).
    FormulaPtr theta(Owner side) const;
    bool is_boolean() const;
};

bool structurally_equal(const Spec& a, const Spec& b);

/// Thrown by parsing, binarization and evaluation on malformed input.
class SpecError : public std::runtime_error {
public:
    SpecError(const std::string& msg, int line = 0, int col = 0);
    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

struct Diagnostic {
    std::string unit;  // empty for declaration-level problems
    int line = 0;
    std::string message;
};

std::vector<Diagnostic> check_wellformed(const Spec& spec);

/// Parses the line-oriented `.gr1` format. Units without a name are auto-named
/// (a1.., g1.., ai1.., gi1.., aj1.., gj1..).
Spec parse_spec(std::string_view text);
Spec load_spec(const std::string& path);
/// Parses a single formula (no variable checks).
FormulaPtr parse_formula(std::string_view text);

std::string print_formula(const FormulaPtr& f);
/// Canonical form: declarations first, then units grouped by kind in source order.
std::string print_spec(const Spec& spec);

/// Values of all spec variables at one step, indexed like Spec::vars.
using Assignment = std::vector<std::int64_t>;
using TraceView = std::span<const Assignment>;

/// Finite-trace semantics of the monitoring fragment.
/// Y at index 0 is false, H is strict-past (vacuously true at 0), and X
/// requires a successor: evaluating X at the last index throws std::out_of_range.
class Evaluator {
public:
    explicit Evaluator(const Spec& spec);

    bool eval(const FormulaPtr& f, TraceView trace, std::size_t i) const;
    /// G-wrapped unit over a finite trace: every admissible index holds
    /// (indices with a successor when the formula mentions X).
    bool holds_globally(const FormulaPtr& f, TraceView trace) const;
    /// First admissible index at which f fails, if any.
    std::optional<std::size_t> first_failure(const FormulaPtr& f, TraceView trace, std::size_t from = 0) const;
    int index_of(const std::string& name) const;

private:
    std::unordered_map<std::string, int> index_;
    std::vector<VarDecl> vars_;
};

/// Which trace indices a G-wrapped unit constrains.
inline std::size_t admissible_end(const FormulaPtr& f, std::size_t trace_len) {
    if (!has_next(f)) return trace_len;
    return trace_len == 0 ? 0 : trace_len - 1;
}

}  // namespace gr1shield

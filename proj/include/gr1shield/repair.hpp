#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gr1shield/controller.hpp"
#include "gr1shield/monitor.hpp"

namespace gr1shield {

class RepairError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One edit of one unit.
struct Edit {
    enum class Kind { AddDisjunct, StrengthenAntecedent, Delete };
    std::string unit;
    Kind kind = Kind::Delete;
    std::vector<FormulaPtr> literals;
    int cost = 1;
    FormulaPtr old_formula;
    /// Null for deletions.
    FormulaPtr new_formula;
};

std::string_view to_string(Edit::Kind k);

/// A set of edits on distinct units, applied together.
struct Hypothesis {
    std::vector<Edit> edits;
    int cost() const;
};

Spec apply(const Spec& spec, const Hypothesis& h);

struct RepairLimits {
    /// Maximum literals per disjunct or antecedent strengthening.
    int max_literals = 2;
    /// Counter-strategy rounds of guarantee weakening per assumption candidate.
    int max_rounds = 32;
    /// Assumption candidates checked for realizability before guarantees are touched.
    int max_assumption_checks = 64;
    /// Assumption candidates tried in the guarantee-weakening phase.
    int max_assumption_candidates = 8;
    GameOptions game;
};

/// Literal vocabulary of a violation: variables of the violated units and
/// variables whose value changed at the violating step.
struct Vocabulary {
    std::vector<std::string> vars;
    /// Observed change of integer variables at the violating step.
    std::vector<std::int64_t> delta;
};

Vocabulary violation_vocabulary(const Spec& spec, TraceView tr, const std::vector<std::string>& units,
                                std::size_t step);

/// Trace-consistent assumption weakenings in ascending cost order. A trace
/// that already satisfies the assumptions yields a single empty hypothesis.
std::vector<Hypothesis> weaken_assumptions(const Spec& spec, TraceView tr, const RepairLimits& limits = {});

struct GuaranteeSearch {
    std::optional<Hypothesis> result;
    int rounds = 0;
    int candidates_pruned = 0;
    int realizability_calls = 0;
};

/// Counter-example guided guarantee weakening: candidates defeated by a
/// known counter-strategy are skipped; every failed realizability check adds
/// that candidate's counter-strategy to the pool.
GuaranteeSearch weaken_guarantees(const Spec& spec_a, const Vocabulary& vocab, const std::optional<CounterStrategy>& cs,
                                  bool allow_critical, const RepairLimits& limits = {});

struct SoundnessReport {
    bool trace_admitted = false;
    bool realizable = false;
    bool assumptions_weakened = false;
    bool guarantees_weakened = false;
    bool endpoint_in_region = false;
    std::vector<std::string> notes;
    bool ok() const {
        return trace_admitted && realizable && assumptions_weakened && guarantees_weakened && endpoint_in_region;
    }
};

struct RepairOutcome {
    Spec spec_prime;
    std::shared_ptr<const Controller> controller;
    Hypothesis assumption_edits;
    Hypothesis guarantee_edits;
    SoundnessReport soundness;
    std::string diff;

    std::vector<Edit> edits() const;
    bool identity() const { return assumption_edits.edits.empty() && guarantee_edits.edits.empty(); }
};

/// Weakens assumptions so the trace is admitted, then guarantees if needed,
/// re-synthesizes and checks soundness. Throws RepairError when no
/// candidate within the limits works.
RepairOutcome spec_repair(const Spec& spec, TraceView tr, const RepairLimits& limits = {});

SoundnessReport verify_soundness(const Spec& spec, const Spec& spec_prime, const Controller& ctrl, TraceView tr);

/// A implies A' and G implies G' on the original variable domains.
bool assumptions_implied(const Spec& spec, const Spec& spec_prime);
bool guarantees_implied(const Spec& spec, const Spec& spec_prime);

/// Unified diff of the canonical prints.
std::string unified_diff(const std::string& before, const std::string& after, const std::string& name = "spec.gr1");
/// One JSON object per edit: {unit, edit, old, new, cost}.
std::string edits_json(const std::vector<Edit>& edits);

}  // namespace gr1shield

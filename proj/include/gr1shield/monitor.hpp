#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "gr1shield/spec.hpp"

namespace gr1shield {

struct Verdict {
    enum class Kind { Ok, Violated, JusticeWarning };
    Kind kind = Kind::Ok;
    std::string unit;
    /// Violated: the trace index at which the unit fails.
    std::size_t step = 0;
    /// JusticeWarning: steps since the unit last held.
    std::size_t stale_for = 0;

    bool ok() const { return kind == Kind::Ok; }
    bool violated() const { return kind == Kind::Violated; }
};

std::string to_string(const Verdict& v);

/// Online environment checker. Each push evaluates every assumption at the
/// newest index it can decide, keeping per-step values of past subformulas
/// so the work per step is independent of the trace length. After the first
/// violation the monitor freezes and keeps returning it.
class Monitor {
public:
    explicit Monitor(const Spec& spec);

    Verdict push(const Assignment& values);
    const Verdict& verdict() const { return verdict_; }
    const std::vector<Assignment>& trace() const { return trace_; }
    std::size_t length() const { return trace_.size(); }
    /// One warning per environment justice unit not satisfied within the last `window` steps.
    std::vector<Verdict> staleness(std::size_t window = 500) const;
    void reset();

private:
    struct Tracked {
        std::size_t unit;
        bool has_next;
    };
    bool eval(const FormulaPtr& f, std::size_t i) const;
    void record_past(std::size_t i);
    void collect_past(const FormulaPtr& f);

    Spec spec_;
    std::unordered_map<std::string, int> index_;
    std::vector<Tracked> init_, safety_, justice_;
    std::vector<const Formula*> past_nodes_;
    std::unordered_map<const Formula*, std::size_t> past_slot_;
    std::vector<std::vector<char>> past_values_;
    std::vector<Assignment> trace_;
    std::vector<std::ptrdiff_t> last_sat_;
    Verdict verdict_;
};

/// Replays a whole trace through a fresh monitor.
Verdict check_step(TraceView tr, const Spec& spec);

/// Environment justice units that have not held in the last `window` steps.
/// Units reading the next step are evaluated on consecutive pairs.
std::vector<Verdict> justice_staleness(TraceView tr, const Spec& spec, std::size_t window = 500);

}  // namespace gr1shield

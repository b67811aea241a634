#pragma once

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gr1shield/controller.hpp"

namespace gr1shield {

/// Packs values of a fixed list of source variables into spec bits.
/// Labelling functions produce values in the order given at construction.
class Labeller {
public:
    Labeller() = default;
    Labeller(const Controller& ctrl, const std::vector<std::string>& names);

    std::size_t size() const { return vars_.size(); }
    State encode(std::span<const std::int64_t> values) const;

private:
    struct Slot {
        std::size_t offset;
        std::size_t width;
        std::int64_t lo;
        std::int64_t step;
        std::int64_t hi;
        std::string name;
    };
    std::vector<Slot> vars_;
};

class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ShieldState {
    std::shared_ptr<const Controller> controller;
    /// Last committed valuation, including history bits.
    State current = 0;
    std::size_t step_count = 0;
    std::size_t override_count = 0;
    std::size_t deadlock_count = 0;
};

/// Starts an episode from the initial environment observation. The current
/// valuation is the lowest system completion inside the winning region.
/// Throws AssumptionViolation when env_bits violates the initial assumptions.
ShieldState shield_init(std::shared_ptr<const Controller> ctrl, State env_bits);

/// Candidate valuation reached if the environment shows `env_bits` and the
/// agent's action labels the system bits `sys_bits`.
State shield_candidate(const ShieldState& st, State env_bits, State sys_bits);

/// True when the environment's move into env_bits respects the assumptions.
bool env_respects(const ShieldState& st, State env_bits);

/// Indices of actions whose labelled valuation keeps the run inside the
/// winning region. `action_sys` holds the system bits of each action.
std::vector<std::size_t> safe_actions(const ShieldState& st, State env_bits, std::span<const State> action_sys);

struct FilterResult {
    std::size_t chosen = 0;
    bool overridden = false;
    bool deadlock = false;
};

/// Keeps a safe proposal, otherwise picks the best-ranked safe action (lowest
/// index on ties) or a uniform one when no ranking is given. An empty safe
/// set passes the proposal through and reports a deadlock.
FilterResult filter(ShieldState& st, std::span<const std::size_t> safe, std::size_t proposed,
                    std::span<const double> ranking, std::mt19937_64& rng);

struct CommitResult {
    bool assumptions_held = true;
    bool in_region = true;
};

/// Advances the shield to the valuation formed by env_bits and the chosen
/// action's system bits.
CommitResult commit(ShieldState& st, State env_bits, State sys_bits);

/// One line of the shared trace format.
struct TraceRecord {
    std::size_t t = 0;
    State env_bits = 0;
    State sys_bits = 0;
    /// Source variable values by declaration order of the spec.
    Assignment values;
    std::size_t proposed = 0;
    std::size_t chosen = 0;
    bool overridden = false;
    bool in_W = true;
    bool deadlock = false;
    std::optional<std::string> violation;
};

std::string to_json_line(const TraceRecord& r, const Spec& source);
TraceRecord parse_trace_line(const std::string& line, const Spec& source);
/// Reads a JSON-lines trace; lines without a `values` object are skipped.
std::vector<TraceRecord> read_trace(std::istream& in, const Spec& source);
std::vector<TraceRecord> load_trace(const std::string& path, const Spec& source);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records, const Spec& source);
/// The valuation sequence of a trace, ready for the evaluator.
std::vector<Assignment> trace_values(const std::vector<TraceRecord>& records);

}  // namespace gr1shield

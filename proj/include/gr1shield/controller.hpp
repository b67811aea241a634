#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "gr1shield/binarize.hpp"
#include "gr1shield/game.hpp"

namespace gr1shield {

/// Environment strategy that defeats every system response. Memory is a pair
/// of justice counters (environment goal being pursued, system goal being
/// awaited); the strategy is positional on (state, counters).
struct CounterStrategy {
    struct Move {
        State env_next = 0;  // env bits (incl. history bits) of the next state
        std::uint32_t ce_next = 0;
        std::uint32_t cs_next = 0;
    };

    std::vector<std::string> layout;  // game bit names, for compatibility checks
    std::size_t ne = 1;
    std::size_t ns = 1;
    State initial_env = 0;
    std::unordered_map<std::uint64_t, Move> moves;

    std::optional<Move> move(State s, std::size_t ce, std::size_t cs) const;
    std::uint64_t key(State s, std::size_t ce, std::size_t cs) const { return (s * ne + ce) * ns + cs; }
    /// Human-readable dump of the strategy reachable from the initial choice.
    std::string describe(const Game& g, std::size_t max_lines = 200) const;
};

/// Solves the explicit product game. Returns nullopt when the system wins
/// from every initial environment choice. Throws GameError when the product
/// exceeds `max_nodes`.
std::optional<CounterStrategy> counter_strategy(const Game& g, std::size_t max_nodes = std::size_t{1} << 22);

/// True when replaying `cs` against the system of `g` (same bit layout)
/// cannot produce a play the system wins: every reachable cycle visits all
/// environment justice sets and misses some system justice set.
bool defeats(const CounterStrategy& cs, const Game& g, std::size_t max_nodes = std::size_t{1} << 22);

class UnrealizableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maximally permissive shield for a source spec: winning region plus the
/// one-step predicates theta_hat and rho_hat.
class Controller {
public:
    /// Throws UnrealizableError when the spec is unrealizable.
    static Controller synthesize(const Spec& source, GameOptions opts = {});
    /// Solves without throwing on unrealizable specs.
    static Controller solve(const Spec& source, GameOptions opts = {});

    const Spec& source() const { return source_; }
    const BitMap& bits() const { return binarized_.map; }
    const Game& game() const { return *game_; }
    std::shared_ptr<const Game> game_ptr() const { return game_; }
    bool realizable() const { return realizable_; }
    const StateSet& region() const { return region_; }
    /// Winning region as a BDD; unavailable for controllers loaded from disk.
    const std::optional<bdd::Bdd>& winning() const { return winning_; }
    std::string spec_hash() const { return hash_; }

    bool in_region(State s) const { return region_.contains(s); }
    /// Number of spec valuations (history bits projected away) in the region.
    std::size_t projected_region_size() const;
    bool theta_hat(State s) const;
    bool rho_hat(State s, State t) const;
    /// The runtime filter: rho_s holds and the successor stays in the region.
    bool allowed(State s, State t) const;
    /// Lowest system completion of `env_state` satisfying theta_s inside the region.
    std::optional<State> initial_completion(State env_state) const;
    bool theta_e(State s) const;
    bool rho_e(State s, State t) const;
    bool rho_s(State s, State t) const;

    /// Packs a source valuation (values indexed like source().vars) into spec bits.
    State pack(const Assignment& values) const;
    Assignment unpack(State s) const;
    /// Successor state from new spec-bit values, with history bits derived from `prev`.
    State successor(State prev, State spec_bits) const;
    State initial_state(State spec_bits) const;

    void save(const std::string& path) const;
    std::string serialize() const;
    static Controller load(const std::string& path, GameOptions opts = {});
    static Controller deserialize(const std::string& text, GameOptions opts = {});

private:
    Spec source_;
    Binarized binarized_;
    std::shared_ptr<const Game> game_;
    std::optional<bdd::Bdd> winning_;
    StateSet region_;
    bool realizable_ = false;
    std::string hash_;
};

/// FNV-1a hash of the canonical print of a spec, as 16 hex digits.
std::string spec_hash(const Spec& spec);

/// Convenience: binarize, build and solve.
bool is_realizable(const Spec& source, GameOptions opts = {});

}  // namespace gr1shield

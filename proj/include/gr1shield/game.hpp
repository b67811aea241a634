#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gr1shield/bdd.hpp"
#include "gr1shield/spec.hpp"

namespace gr1shield {

/// Packed game state: bit b holds game variable b (spec bits first, then
/// auxiliary history bits).
using State = std::uint64_t;

class GameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GameOptions {
    /// Hard cap on the number of state bits (2^cap states).
    unsigned max_state_bits = 24;
};

/// History bit tracking Y(inner) or H(inner) for past operators in assumptions.
struct AuxBit {
    bool historically = false;
    FormulaPtr inner;
    std::string label;
};

/// Symbolic two-player game of a Boolean spec. BDD variable 2b is the current
/// value of game bit b, 2b+1 its next value. Past operators are compiled into
/// environment-owned history bits whose updates are part of rho_e.
class Game {
public:
    explicit Game(const Spec& boolean_spec, GameOptions opts = {});

    const Spec& spec() const { return spec_; }
    unsigned spec_bits() const { return static_cast<unsigned>(spec_.vars.size()); }
    unsigned num_bits() const { return num_bits_; }
    const std::vector<AuxBit>& aux() const { return aux_; }
    std::string bit_name(unsigned b) const;
    bool is_env_bit(unsigned b) const { return (env_mask_ >> b) & 1; }
    State env_mask() const { return env_mask_; }
    State sys_mask() const { return sys_mask_; }
    State spec_mask() const { return spec_bits() == 64 ? ~State{0} : (State{1} << spec_bits()) - 1; }

    bdd::Manager& manager() const { return *mgr_; }
    static unsigned cur(unsigned b) { return 2 * b; }
    static unsigned nxt(unsigned b) { return 2 * b + 1; }

    const bdd::Bdd& theta_e() const { return theta_e_; }
    const bdd::Bdd& theta_s() const { return theta_s_; }
    const bdd::Bdd& rho_e() const { return rho_e_; }
    const bdd::Bdd& rho_s() const { return rho_s_; }
    /// Justice sets over current variables; a missing side is {true}.
    const std::vector<bdd::Bdd>& justice_e() const { return je_; }
    const std::vector<bdd::Bdd>& justice_s() const { return js_; }
    const bdd::Bdd& next_env_cube() const { return next_env_cube_; }
    const bdd::Bdd& next_sys_cube() const { return next_sys_cube_; }
    const bdd::Bdd& cur_env_cube() const { return cur_env_cube_; }
    const bdd::Bdd& cur_sys_cube() const { return cur_sys_cube_; }

    /// BDD of a formula over current/next variables. Past subformulas must
    /// already have history bits.
    bdd::Bdd encode(const FormulaPtr& f) const;
    /// Transition constraint contributed by one unit (pure-state units are
    /// applied to the next state), or its initial constraint.
    bdd::Bdd unit_transition(const Unit& u) const;
    bdd::Bdd unit_initial(const Unit& u) const;
    bdd::Bdd to_next(const bdd::Bdd& f) const;
    /// States from which the system can force the next state into `target`.
    bdd::Bdd cpre(const bdd::Bdd& target) const;

    bool eval_state(const bdd::Bdd& f, State s) const;
    bool eval_pair(const bdd::Bdd& f, State s, State t) const;
    /// History bits of the successor of s (they depend on s only).
    State aux_successor(State s) const;
    /// History bits at step 0.
    State initial_aux() const;

private:
    void register_past(const FormulaPtr& f);
    int aux_index(const FormulaPtr& f) const;
    bdd::Bdd encode_rec(const FormulaPtr& f, bool under_next) const;

    std::unique_ptr<bdd::Manager> mgr_;
    Spec spec_;
    std::vector<AuxBit> aux_;
    std::vector<std::string> aux_keys_;
    std::vector<bdd::Bdd> aux_update_;
    unsigned num_bits_ = 0;
    State env_mask_ = 0;
    State sys_mask_ = 0;
    bdd::Bdd theta_e_, theta_s_, rho_e_, rho_s_;
    std::vector<bdd::Bdd> je_, js_;
    bdd::Bdd next_env_cube_, next_sys_cube_, cur_env_cube_, cur_sys_cube_;
    std::vector<unsigned> to_next_map_;
};

/// GF(phi) with phi reading the next step, rewritten over the previous step
/// (current atoms become Y(atom), atoms under X become current).
FormulaPtr shift_justice(const FormulaPtr& f);

/// Dense bit-indexed set of game states.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(unsigned bits) : bits_(bits), words_(((std::size_t{1} << bits) + 63) / 64, 0) {}

    unsigned bits() const { return bits_; }
    std::size_t universe() const { return std::size_t{1} << bits_; }
    bool contains(State s) const { return (words_[s >> 6] >> (s & 63)) & 1; }
    void insert(State s) { words_[s >> 6] |= std::uint64_t{1} << (s & 63); }
    std::size_t count() const;
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }
    bool operator==(const StateSet& o) const { return bits_ == o.bits_ && words_ == o.words_; }

    static StateSet from_bdd(const Game& g, const bdd::Bdd& f);

private:
    unsigned bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Winning region of the GR(1) game (nested fixpoint over current variables).
bdd::Bdd winning_region_bdd(const Game& g);
/// Strict realizability: every env initial choice has a system completion
/// satisfying theta_s inside the winning region.
bool is_realizable(const Game& g, const bdd::Bdd& winning);

}  // namespace gr1shield

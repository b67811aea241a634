#pragma once

#include <memory>

#include "gr1shield/binarize.hpp"
#include "gr1shield/game.hpp"

namespace gr1shield::detail {

/// Symbolic meaning of source formulas over (current, next) valuations,
/// restricted to in-domain values of integer variables.
class Semantics {
public:
    explicit Semantics(const Spec& source, GameOptions opts = {});

    /// Formula over current and next variables.
    bdd::Bdd encode(const FormulaPtr& f) const;
    /// G-wrapped unit as a constraint on one (current, next) pair.
    bdd::Bdd step(const Unit& u) const;
    bool valid(const FormulaPtr& f) const;
    bool implies(const bdd::Bdd& a, const bdd::Bdd& b) const;
    bool implies(const FormulaPtr& a, const FormulaPtr& b) const { return implies(encode(a), encode(b)); }
    bool equivalent(const FormulaPtr& a, const FormulaPtr& b) const;
    const Game& game() const { return *game_; }
    bdd::Bdd truth() const { return game_->manager().constant(true); }

private:
    Spec source_;
    std::unique_ptr<Game> game_;
    bdd::Bdd domain_;
};

}  // namespace gr1shield::detail

#include "semantics.hpp"

namespace gr1shield::detail {

Semantics::Semantics(const Spec& source, GameOptions opts) : source_(source) {
    Binarized b = binarize(source);
    game_ = std::make_unique<Game>(b.spec, opts);
    domain_ = game_->manager().constant(true);
    for (const auto& u : b.spec.units) {
        if (!u.generated) continue;
        bdd::Bdd d = game_->encode(u.formula);
        domain_ &= d & game_->to_next(d);
    }
}

bdd::Bdd Semantics::encode(const FormulaPtr& f) const { return game_->encode(binarize_formula(f, source_)); }

bdd::Bdd Semantics::step(const Unit& u) const {
    bdd::Bdd b = encode(u.formula);
    if (has_next(u.formula)) return b;
    return b & game_->to_next(b);
}

bool Semantics::valid(const FormulaPtr& f) const { return (domain_ & !encode(f)) == game_->manager().constant(false); }

bool Semantics::implies(const bdd::Bdd& a, const bdd::Bdd& b) const {
    return (domain_ & a & !b) == game_->manager().constant(false);
}

bool Semantics::equivalent(const FormulaPtr& a, const FormulaPtr& b) const {
    bdd::Bdd x = encode(a), y = encode(b);
    return implies(x, y) && implies(y, x);
}

}  // namespace gr1shield::detail

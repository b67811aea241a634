#include "gr1shield/game.hpp"

namespace gr1shield {

using bdd::Bdd;

FormulaPtr shift_justice(const FormulaPtr& fm) {
    struct Shift {
        static FormulaPtr run(const FormulaPtr& f, bool under_next) {
            switch (f->kind) {
                case FormulaKind::Const: return f;
                case FormulaKind::Atom:
                case FormulaKind::IntCompare:
                    return under_next ? f : f::yesterday(f);
                case FormulaKind::Next: return run(f->kids[0], true);
                case FormulaKind::Yesterday:
                case FormulaKind::Historically:
                    return under_next ? f : f::yesterday(f);
                case FormulaKind::IntNextEquals:
                    throw GameError("integer formula in a Boolean game");
                default: {
                    auto node = std::make_shared<Formula>(*f);
                    for (auto& k : node->kids) k = run(k, under_next);
                    return node;
                }
            }
        }
    };
    return Shift::run(fm, false);
}

namespace {

std::string past_key(const FormulaPtr& f) {
    return print_formula(f);
}

FormulaPtr justice_formula(const Unit& u) {
    return has_next(u.formula) ? shift_justice(u.formula) : u.formula;
}

}  // namespace

void Game::register_past(const FormulaPtr& f) {
    for (const auto& k : f->kids) register_past(k);
    if (f->kind != FormulaKind::Yesterday && f->kind != FormulaKind::Historically) return;
    std::string key = past_key(f);
    for (const auto& existing : aux_keys_)
        if (existing == key) return;
    aux_keys_.push_back(key);
    aux_.push_back({f->kind == FormulaKind::Historically, f->kids[0], key});
}

int Game::aux_index(const FormulaPtr& f) const {
    std::string key = past_key(f);
    for (std::size_t i = 0; i < aux_keys_.size(); ++i)
        if (aux_keys_[i] == key) return static_cast<int>(i);
    return -1;
}

std::string Game::bit_name(unsigned b) const {
    if (b < spec_bits()) return spec_.vars[b].name;
    return "aux" + std::to_string(b - spec_bits());
}

Game::Game(const Spec& boolean_spec, GameOptions opts) : spec_(boolean_spec) {
    if (!spec_.is_boolean()) throw GameError("game construction needs a binarized (Boolean) spec");
    for (const auto& u : spec_.units) {
        if (u.kind == UnitKind::AssumeJustice || u.kind == UnitKind::GuaranteeJustice)
            register_past(justice_formula(u));
        else if (is_assumption(u.kind))
            register_past(u.formula);
    }
    num_bits_ = spec_bits() + static_cast<unsigned>(aux_.size());
    if (num_bits_ > opts.max_state_bits || num_bits_ > 63)
        throw GameError("state space of " + std::to_string(num_bits_) + " bits exceeds the cap of " +
                        std::to_string(opts.max_state_bits) + " bits");
    mgr_ = std::make_unique<bdd::Manager>(2 * num_bits_);

    std::vector<unsigned> ne, ns, ce, cs;
    for (unsigned b = 0; b < num_bits_; ++b) {
        const bool env = b >= spec_bits() || spec_.vars[b].owner == Owner::Env;
        (env ? env_mask_ : sys_mask_) |= State{1} << b;
        (env ? ne : ns).push_back(nxt(b));
        (env ? ce : cs).push_back(cur(b));
    }
    next_env_cube_ = mgr_->cube(ne);
    next_sys_cube_ = mgr_->cube(ns);
    cur_env_cube_ = mgr_->cube(ce);
    cur_sys_cube_ = mgr_->cube(cs);
    for (unsigned v = 0; v < 2 * num_bits_; ++v) to_next_map_.push_back(v % 2 == 0 ? v + 1 : v);

    theta_e_ = theta_s_ = rho_e_ = rho_s_ = mgr_->constant(true);
    for (std::size_t k = 0; k < aux_.size(); ++k) {
        const unsigned b = spec_bits() + static_cast<unsigned>(k);
        Bdd inner = encode(aux_[k].inner);
        Bdd update = aux_[k].historically ? mgr_->var(cur(b)) & inner : inner;
        aux_update_.push_back(update);
        rho_e_ &= mgr_->iff(mgr_->var(nxt(b)), update);
        theta_e_ &= aux_[k].historically ? mgr_->var(cur(b)) : mgr_->nvar(cur(b));
    }
    for (const auto& u : spec_.units) {
        switch (u.kind) {
            case UnitKind::AssumeInit: theta_e_ &= encode(u.formula); break;
            case UnitKind::GuaranteeInit: theta_s_ &= encode(u.formula); break;
            case UnitKind::Assume:
                rho_e_ &= unit_transition(u);
                if (!has_next(u.formula)) theta_e_ &= encode(u.formula);
                break;
            case UnitKind::Guarantee:
                rho_s_ &= unit_transition(u);
                if (!has_next(u.formula)) theta_s_ &= encode(u.formula);
                break;
            case UnitKind::AssumeJustice: je_.push_back(encode(justice_formula(u))); break;
            case UnitKind::GuaranteeJustice: js_.push_back(encode(justice_formula(u))); break;
        }
    }
    if (je_.empty()) je_.push_back(mgr_->constant(true));
    if (js_.empty()) js_.push_back(mgr_->constant(true));
}

Bdd Game::encode_rec(const FormulaPtr& f, bool under_next) const {
    switch (f->kind) {
        case FormulaKind::Const: return mgr_->constant(f->value);
        case FormulaKind::Atom: {
            int i = spec_.var_index(f->var);
            if (i < 0) throw GameError("unknown variable '" + f->var + "'");
            const unsigned b = static_cast<unsigned>(i);
            return mgr_->var(under_next ? nxt(b) : cur(b));
        }
        case FormulaKind::Not: return !encode_rec(f->kids[0], under_next);
        case FormulaKind::And: return encode_rec(f->kids[0], under_next) & encode_rec(f->kids[1], under_next);
        case FormulaKind::Or: return encode_rec(f->kids[0], under_next) | encode_rec(f->kids[1], under_next);
        case FormulaKind::Implies:
            return mgr_->implies(encode_rec(f->kids[0], under_next), encode_rec(f->kids[1], under_next));
        case FormulaKind::Next:
            if (under_next) throw GameError("nested X");
            return encode_rec(f->kids[0], true);
        case FormulaKind::Yesterday:
        case FormulaKind::Historically: {
            int k = aux_index(f);
            if (k < 0) throw GameError("past operator outside the assumptions: " + print_formula(f));
            const unsigned b = spec_bits() + static_cast<unsigned>(k);
            return mgr_->var(under_next ? nxt(b) : cur(b));
        }
        case FormulaKind::IntCompare:
        case FormulaKind::IntNextEquals:
            throw GameError("integer formula in a Boolean game");
    }
    return mgr_->constant(false);
}

Bdd Game::encode(const FormulaPtr& f) const { return encode_rec(f, false); }

Bdd Game::unit_transition(const Unit& u) const {
    if (has_next(u.formula)) return encode(u.formula);
    return encode(f::next(u.formula));
}

Bdd Game::unit_initial(const Unit& u) const {
    if (has_next(u.formula)) return mgr_->constant(true);
    return encode(u.formula);
}

Bdd Game::to_next(const Bdd& f) const { return mgr_->rename(f, to_next_map_); }

Bdd Game::cpre(const Bdd& target) const {
    Bdd next_target = to_next(target);
    Bdd sys_can = mgr_->and_exists(rho_s_, next_target, next_sys_cube_);
    Bdd env_escape = mgr_->and_exists(rho_e_, !sys_can, next_env_cube_);
    return !env_escape;
}

bool Game::eval_state(const Bdd& f, State s) const {
    return mgr_->eval(f, [s](unsigned v) { return v % 2 == 0 && ((s >> (v / 2)) & 1); });
}

bool Game::eval_pair(const Bdd& f, State s, State t) const {
    return mgr_->eval(f, [s, t](unsigned v) { return (((v % 2 == 0) ? s : t) >> (v / 2)) & 1; });
}

State Game::aux_successor(State s) const {
    State out = 0;
    for (std::size_t k = 0; k < aux_update_.size(); ++k)
        if (eval_state(aux_update_[k], s)) out |= State{1} << (spec_bits() + k);
    return out;
}

State Game::initial_aux() const {
    State out = 0;
    for (std::size_t k = 0; k < aux_.size(); ++k)
        if (aux_[k].historically) out |= State{1} << (spec_bits() + k);
    return out;
}

}  // namespace gr1shield

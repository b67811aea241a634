#include <bit>

#include "gr1shield/game.hpp"

namespace gr1shield {

using bdd::Bdd;

std::size_t StateSet::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

StateSet StateSet::from_bdd(const Game& g, const Bdd& f) {
    StateSet out(g.num_bits());
    const unsigned n = g.num_bits();
    bdd::Manager& m = g.manager();
    if (f.is_false()) return out;
    struct Walker {
        bdd::Manager& m;
        StateSet& out;
        unsigned n;
        void run(const Bdd& node, unsigned b, State base) {
            if (node.is_false()) return;
            if (node.is_true()) {
                // Every completion of the remaining bits.
                const State span = State{1} << (n - b);
                for (State k = 0; k < span; ++k) out.insert(base | (k << b));
                return;
            }
            const unsigned top = m.top_var(node);
            if (top % 2 != 0) throw GameError("state set depends on next-state variables");
            if (top == Game::cur(b)) {
                run(m.low(node), b + 1, base);
                run(m.high(node), b + 1, base | (State{1} << b));
            } else {
                run(node, b + 1, base);
                run(node, b + 1, base | (State{1} << b));
            }
        }
    };
    Walker{m, out, n}.run(f, 0, 0);
    return out;
}

Bdd winning_region_bdd(const Game& g) {
    bdd::Manager& m = g.manager();
    const auto& je = g.justice_e();
    const auto& js = g.justice_s();
    Bdd z = m.constant(true);
    for (;;) {
        Bdd z_start = z;
        for (const auto& goal : js) {
            Bdd reach_goal = goal & g.cpre(z);
            Bdd y = m.constant(false);
            for (;;) {
                Bdd start = reach_goal | g.cpre(y);
                Bdd y_next = m.constant(false);
                for (const auto& fair : je) {
                    Bdd not_fair = !fair;
                    Bdd x = z;
                    for (;;) {
                        Bdd x_next = start | (not_fair & g.cpre(x));
                        if (x_next == x) break;
                        x = x_next;
                    }
                    y_next |= x;
                }
                if (y_next == y) break;
                y = y_next;
            }
            z = y;
        }
        if (z == z_start) return z;
    }
}

bool is_realizable(const Game& g, const Bdd& winning) {
    bdd::Manager& m = g.manager();
    Bdd completion = m.exists(g.theta_s() & winning, g.cur_sys_cube());
    Bdd bad = g.theta_e() & !completion;
    return bad.is_false();
}

}  // namespace gr1shield

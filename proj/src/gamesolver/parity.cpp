#include "parity.hpp"

#include <algorithm>
#include <stdexcept>

namespace gr1shield::detail {

namespace {

using Mask = std::vector<char>;

class Zielonka {
public:
    explicit Zielonka(const ParityGame& g) : g_(g), pred_(g.size()) {
        for (std::uint32_t v = 0; v < g.size(); ++v) {
            if (g.succ[v].empty()) throw std::logic_error("parity game node without successor");
            for (auto w : g.succ[v]) pred_[w].push_back(v);
        }
        sol_.winner.assign(g.size(), 0);
        sol_.strategy.assign(g.size(), ParitySolution::kNone);
    }

    ParitySolution run() {
        Mask all(g_.size(), 1);
        std::vector<Mask> win = solve(all);
        for (std::uint32_t v = 0; v < g_.size(); ++v) sol_.winner[v] = win[1][v] ? 1 : 0;
        return sol_;
    }

private:
    /// Attractor of `target` for `player` inside `game`; records the
    /// attracting move for player-owned nodes.
    Mask attractor(const Mask& game, const Mask& target, std::uint8_t player) {
        Mask in(target);
        std::vector<std::uint32_t> count(g_.size(), 0);
        std::vector<std::uint32_t> queue;
        for (std::uint32_t v = 0; v < g_.size(); ++v) {
            if (!game[v]) continue;
            if (in[v]) queue.push_back(v);
            for (auto w : g_.succ[v])
                if (game[w]) ++count[v];
        }
        while (!queue.empty()) {
            std::uint32_t w = queue.back();
            queue.pop_back();
            for (auto v : pred_[w]) {
                if (!game[v] || in[v]) continue;
                if (g_.owner[v] == player) {
                    in[v] = 1;
                    sol_.strategy[v] = w;
                    queue.push_back(v);
                } else if (--count[v] == 0) {
                    in[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        return in;
    }

    std::vector<Mask> solve(Mask game) {
        const std::size_t n = g_.size();
        std::vector<Mask> result(2, Mask(n, 0));
        for (;;) {
            int top = -1;
            for (std::uint32_t v = 0; v < n; ++v)
                if (game[v]) top = std::max<int>(top, g_.priority[v]);
            if (top < 0) return result;
            const std::uint8_t a = static_cast<std::uint8_t>(top % 2);
            Mask u(n, 0);
            for (std::uint32_t v = 0; v < n; ++v)
                if (game[v] && g_.priority[v] == top) u[v] = 1;
            Mask attr = attractor(game, u, a);
            Mask rest(n, 0);
            for (std::uint32_t v = 0; v < n; ++v) rest[v] = game[v] && !attr[v];
            std::vector<Mask> sub = solve(rest);
            bool opponent_wins_somewhere = false;
            for (std::uint32_t v = 0; v < n; ++v)
                if (sub[1 - a][v]) opponent_wins_somewhere = true;
            if (!opponent_wins_somewhere) {
                for (std::uint32_t v = 0; v < n; ++v) {
                    if (!game[v]) continue;
                    result[a][v] = 1;
                    if (u[v] && g_.owner[v] == a) {
                        for (auto w : g_.succ[v]) {
                            if (game[w]) {
                                sol_.strategy[v] = w;
                                break;
                            }
                        }
                    }
                }
                return result;
            }
            Mask opp = attractor(game, sub[1 - a], static_cast<std::uint8_t>(1 - a));
            for (std::uint32_t v = 0; v < n; ++v) {
                if (opp[v]) {
                    result[1 - a][v] = 1;
                    game[v] = 0;
                }
            }
        }
    }

    const ParityGame& g_;
    std::vector<std::vector<std::uint32_t>> pred_;
    ParitySolution sol_;
};

}  // namespace

ParitySolution solve_parity(const ParityGame& game) { return Zielonka(game).run(); }

}  // namespace gr1shield::detail

#include "gr1shield/agent.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace gr1shield {

void AgentConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
    for (double e : {epsilon_start, epsilon_final})
        if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (decay_fraction < 0.0) throw std::invalid_argument("decay fraction must be non-negative");
}

double AgentConfig::epsilon(std::size_t step) const {
    const double horizon = decay_fraction * static_cast<double>(total_steps);
    if (horizon <= 0.0 || static_cast<double>(step) >= horizon) return epsilon_final;
    const double frac = static_cast<double>(step) / horizon;
    return epsilon_start + (epsilon_final - epsilon_start) * frac;
}

QTable::QTable(std::size_t states, std::size_t actions)
    : states_(states), actions_(actions), values_(states * actions, 0.0), visits_(states * actions, 0) {}

double QTable::max(std::size_t s) const {
    auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

std::size_t QTable::greedy(std::size_t s) const {
    auto r = row(s);
    return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

std::size_t QTable::greedy_among(std::size_t s, std::span<const std::size_t> allowed) const {
    if (allowed.empty()) return greedy(s);
    std::size_t best = allowed[0];
    for (std::size_t a : allowed)
        if (at(s, a) > at(s, best) || (at(s, a) == at(s, best) && a < best)) best = a;
    return best;
}

void QTable::update(std::size_t s, std::size_t a, double r, std::size_t s_next, double alpha, double gamma,
                    bool terminal) {
    const double target = r + (terminal ? 0.0 : gamma * max(s_next));
    double& q = at(s, a);
    q += alpha * (target - q);
    ++visits_[s * actions_ + a];
}

void QTable::save(std::ostream& out) const {
    out << states_ << ' ' << actions_ << '\n' << std::setprecision(17);
    for (std::size_t s = 0; s < states_; ++s) {
        for (std::size_t a = 0; a < actions_; ++a) out << (a ? " " : "") << at(s, a);
        out << '\n';
    }
}

QTable QTable::load(std::istream& in) {
    std::size_t states = 0, actions = 0;
    if (!(in >> states >> actions) || actions == 0) throw std::runtime_error("malformed q-table header");
    QTable q(states, actions);
    for (double& v : q.values_)
        if (!(in >> v)) throw std::runtime_error("truncated q-table");
    return q;
}

std::size_t select_action(const QTable& q, std::size_t s, double eps, std::mt19937_64& rng) {
    if (eps > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < eps)
        return std::uniform_int_distribution<std::size_t>(0, q.actions() - 1)(rng);
    return q.greedy(s);
}

void q_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next, const AgentConfig& cfg,
              bool terminal) {
    q.update(s, a, r, s_next, cfg.alpha, cfg.gamma, terminal);
}

}  // namespace gr1shield

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace gr1shield {

struct AgentConfig {
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_final = 0.05;
    /// Fraction of total_steps over which epsilon decays linearly.
    double decay_fraction = 0.2;
    std::size_t total_steps = 200000;
    std::size_t eval_episodes = 20;

    void validate() const;
    double epsilon(std::size_t step) const;
};

/// Dense tabular action values, initialised to zero.
class QTable {
public:
    QTable() = default;
    QTable(std::size_t states, std::size_t actions);

    std::size_t states() const { return states_; }
    std::size_t actions() const { return actions_; }
    double& at(std::size_t s, std::size_t a) { return values_[s * actions_ + a]; }
    double at(std::size_t s, std::size_t a) const { return values_[s * actions_ + a]; }
    std::span<const double> row(std::size_t s) const { return {values_.data() + s * actions_, actions_}; }
    std::uint64_t visits(std::size_t s, std::size_t a) const { return visits_[s * actions_ + a]; }
    double max(std::size_t s) const;
    /// Lowest-index argmax.
    std::size_t greedy(std::size_t s) const;
    /// Greedy action among `allowed` (lowest index on ties); falls back to greedy(s) when empty.
    std::size_t greedy_among(std::size_t s, std::span<const std::size_t> allowed) const;

    void update(std::size_t s, std::size_t a, double r, std::size_t s_next, double alpha, double gamma,
                bool terminal = false);

    /// Plain-text dump: a size line, then one row of values per state.
    void save(std::ostream& out) const;
    static QTable load(std::istream& in);

private:
    std::size_t states_ = 0;
    std::size_t actions_ = 0;
    std::vector<double> values_;
    std::vector<std::uint64_t> visits_;
};

/// Epsilon-greedy selection: uniform with probability eps, otherwise greedy.
std::size_t select_action(const QTable& q, std::size_t s, double eps, std::mt19937_64& rng);

/// Q(s,a) += alpha * (r + gamma * max Q(s',.) - Q(s,a)); the bootstrap term is dropped when terminal.
void q_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next, const AgentConfig& cfg,
              bool terminal = false);

}  // namespace gr1shield

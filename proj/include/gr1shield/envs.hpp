#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gr1shield {

enum class EnvMode { Training, Deployment };

EnvMode parse_mode(const std::string& s);
std::string to_string(EnvMode m);

/// Water pump in a mine. Inflow follows a three-state Markov chain; methane
/// and electricity price follow two-state chains. Action 0 leaves the pump
/// off, action 1 switches it on.
struct MinepumpParams {
    std::array<std::array<double, 3>, 3> inflow_kernel{{{0.80, 0.18, 0.02}, {0.10, 0.80, 0.10}, {0.02, 0.28, 0.70}}};
    std::array<double, 3> inflow_rates{0.0, 0.5, 2.0};
    double removal = 6.0;
    double high = 10.0;
    double max_water = 18.0;
    double methane_off = 0.25;
    double methane_on = 1.0 / 6.0;
    double price_persistence = 0.7;
    std::array<double, 2> tariffs{1.0, 4.0};
    double pump_on_cost = 0.5;
    double pump_off_cost = 0.1;
    double highwater_penalty = 1.0;
    int episode_length = 200;
};

struct MinepumpState {
    double water = 0.0;
    int inflow = 0;
    bool methane = false;
    int price = 0;
    bool last_pump = false;
    bool last_last_pump = false;
};

struct MinepumpStep {
    MinepumpState next;
    double reward = 0.0;
};

class Minepump {
public:
    using State = MinepumpState;
    static constexpr std::size_t num_actions = 2;

    explicit Minepump(EnvMode mode = EnvMode::Training, MinepumpParams params = {});

    EnvMode mode() const { return mode_; }
    const MinepumpParams& params() const { return p_; }
    int episode_length() const { return p_.episode_length; }

    MinepumpState initial(std::mt19937_64& rng) const;
    MinepumpStep step(const MinepumpState& st, bool pump, std::mt19937_64& rng) const;
    bool terminal(const MinepumpState&) const { return false; }

    bool highwater(const MinepumpState& st) const { return st.water > p_.high; }
    static std::vector<std::string> env_vars() { return {"highwater", "methane"}; }
    static std::vector<std::string> sys_vars() { return {"pump"}; }
    std::vector<std::int64_t> labels(const MinepumpState& st) const;
    std::vector<std::int64_t> action_labels(std::size_t a, const MinepumpState& st) const;

    std::size_t num_abstract_states() const;
    std::size_t abstract_state(const MinepumpState& st) const;

private:
    int sample(const std::array<double, 3>& row, std::mt19937_64& rng) const;
    EnvMode mode_;
    MinepumpParams p_;
};

/// Abstract submarine: oxygen drains while submerged and refills at the
/// surface; divers appear at four depths and are rescued by visiting them.
/// Actions: 0 stay, 1 up, 2 down.
struct SeaquestParams {
    int max_oxygen = 64;
    int max_depth = 92;
    int depth_step = 4;
    std::array<int, 4> diver_depths{16, 32, 48, 64};
    double respawn = 0.05;
    double rescue_reward = 10.0;
    /// Deployment switches to the fast depletion rate once oxygen reaches this level.
    int violation_oxygen = 48;
    int fast_rate = 2;
    int episode_length = 1000;
};

struct SeaquestState {
    int oxygen = 0;
    int depth = 0;
    std::array<bool, 4> divers{};
    std::array<bool, 4> rescue_flags{};
    int depletion_rate = 1;
    bool failed = false;
};

struct SeaquestStep {
    SeaquestState next;
    double reward = 0.0;
};

class Seaquest {
public:
    using State = SeaquestState;
    static constexpr std::size_t num_actions = 3;

    explicit Seaquest(EnvMode mode = EnvMode::Training, SeaquestParams params = {});

    EnvMode mode() const { return mode_; }
    const SeaquestParams& params() const { return p_; }
    int episode_length() const { return p_.episode_length; }

    SeaquestState initial(std::mt19937_64& rng) const;
    SeaquestStep step(const SeaquestState& st, std::size_t action, std::mt19937_64& rng) const;
    /// Out of oxygen below the surface.
    bool terminal(const SeaquestState& st) const { return st.failed; }

    static std::vector<std::string> env_vars();
    static std::vector<std::string> sys_vars();
    std::vector<std::int64_t> labels(const SeaquestState& st) const;
    std::vector<std::int64_t> action_labels(std::size_t a, const SeaquestState& st) const;

    std::size_t num_abstract_states() const;
    std::size_t abstract_state(const SeaquestState& st) const;

private:
    EnvMode mode_;
    SeaquestParams p_;
};

}  // namespace gr1shield

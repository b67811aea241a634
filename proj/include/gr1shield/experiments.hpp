#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gr1shield/agent.hpp"
#include "gr1shield/controller.hpp"
#include "gr1shield/envs.hpp"
#include "gr1shield/repair.hpp"
#include "gr1shield/shield.hpp"

namespace gr1shield {

enum class Variant {
    None,
    Static1,
    Static2,
    StaticStar,
    Naive,
    Static,
    Repaired,
    Adaptive,
    Symbolic1,
    Symbolic2,
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);
/// Row label used in result tables.
std::string label(Variant v);
/// Variants of one environment in table order.
std::vector<Variant> variants_for(const std::string& env);
bool valid_for(Variant v, const std::string& env);
/// Spec file (relative to the fixtures directory) enforced by a variant; empty for None.
std::string shield_spec_file(Variant v, const std::string& env);
/// Spec whose winning region defines "% in W" for unshielded runs.
std::string reference_spec_file(const std::string& env);

struct ExperimentConfig {
    std::string env = "minepump";
    Variant variant = Variant::None;
    std::vector<std::uint64_t> seeds{0};
    AgentConfig agent;
    std::string fixtures_dir;
    /// Overrides the variant's shield spec when non-empty.
    std::string spec_path;
    RepairLimits repair;
    /// Environment mode of the evaluation episodes.
    EnvMode eval_mode = EnvMode::Deployment;
    /// Keep the records of the first evaluation episode.
    bool record_trace = false;
    void validate() const;
};

/// Metrics of a single seed.
struct RunMetrics {
    std::uint64_t seed = 0;
    double train_reward = 0.0;
    double train_success = 0.0;
    double train_in_w = 0.0;
    double eval_reward = 0.0;
    double eval_success = 0.0;
    double eval_override = 0.0;
    double eval_in_w = 0.0;
    std::size_t train_episodes = 0;
    std::size_t deadlocks = 0;
    std::size_t repairs = 0;
    std::size_t repair_failures = 0;
    /// Fraction of eval episodes satisfying each checked guarantee.
    std::vector<double> eval_compliance;
    /// Per training episode: return and success.
    std::vector<double> curve_return;
    std::vector<bool> curve_success;
    /// Spec in force at the end of the run (differs from the start only after repair).
    std::string final_spec;
    /// First evaluation episode, when recorded; values follow trace_spec's declaration order.
    std::vector<TraceRecord> eval_trace;
    std::string trace_spec;
};

struct Stat {
    double mean = 0.0;
    double se = 0.0;
};

Stat summarize(const std::vector<double>& xs);

struct MetricsRow {
    std::string env;
    Variant variant = Variant::None;
    std::string label;
    Stat train_reward, train_success, train_in_w;
    Stat eval_reward, eval_success, eval_override, eval_in_w;
    std::vector<std::string> guarantee_names;
    std::vector<Stat> compliance;
    std::size_t seeds = 0;
    std::size_t repairs = 0;
    std::size_t deadlocks = 0;
};

/// Names of the guarantees checked per episode.
std::vector<std::string> checked_guarantees(const std::string& env);

/// Trains and evaluates one seed; the learned table is stored in `q_out` when given.
RunMetrics run_seed(const ExperimentConfig& cfg, std::uint64_t seed, QTable* q_out = nullptr);
/// Evaluation episodes only, starting from a trained table.
RunMetrics eval_seed(const ExperimentConfig& cfg, std::uint64_t seed, const QTable& q);
/// All seeds of a config, in parallel; results follow the seed order.
std::vector<RunMetrics> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0,
                                       std::vector<QTable>* tables = nullptr);
MetricsRow aggregate(const ExperimentConfig& cfg, const std::vector<RunMetrics>& runs);

void write_metrics_header(std::ostream& out, const std::vector<std::string>& guarantee_names);
void write_metrics_row(std::ostream& out, const MetricsRow& row);
void write_curves(std::ostream& out, const std::string& variant, const std::vector<RunMetrics>& runs);
std::string format_table(const std::vector<MetricsRow>& rows);

struct CellCheck {
    std::string row;
    std::string column;
    std::string expected;
    double actual = 0.0;
    bool pass = false;
};

/// Compares rows against the published compliance pattern of an environment.
std::vector<CellCheck> check_pattern(const std::string& env, const std::vector<MetricsRow>& rows);

}  // namespace gr1shield

#include <cstdio>
#include <ostream>
#include <sstream>

#include "gr1shield/experiments.hpp"

namespace gr1shield {

namespace {

template <class F>
Stat over(const std::vector<RunMetrics>& runs, F f) {
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(f(r));
    return summarize(xs);
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string pm(const Stat& s, int digits = 2) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*f +- %.*f", digits, s.mean, digits, s.se);
    return buf;
}

void cell(std::ostream& out, const Stat& s) { out << ',' << num(s.mean) << ',' << num(s.se); }

}  // namespace

MetricsRow aggregate(const ExperimentConfig& cfg, const std::vector<RunMetrics>& runs) {
    MetricsRow row;
    row.env = cfg.env;
    row.variant = cfg.variant;
    row.label = label(cfg.variant);
    row.seeds = runs.size();
    row.train_reward = over(runs, [](const RunMetrics& r) { return r.train_reward; });
    row.train_success = over(runs, [](const RunMetrics& r) { return r.train_success; });
    row.train_in_w = over(runs, [](const RunMetrics& r) { return r.train_in_w; });
    row.eval_reward = over(runs, [](const RunMetrics& r) { return r.eval_reward; });
    row.eval_success = over(runs, [](const RunMetrics& r) { return r.eval_success; });
    row.eval_override = over(runs, [](const RunMetrics& r) { return r.eval_override; });
    row.eval_in_w = over(runs, [](const RunMetrics& r) { return r.eval_in_w; });
    row.guarantee_names = checked_guarantees(cfg.env);
    for (std::size_t i = 0; i < row.guarantee_names.size(); ++i)
        row.compliance.push_back(over(runs, [i](const RunMetrics& r) {
            return i < r.eval_compliance.size() ? r.eval_compliance[i] : 0.0;
        }));
    for (const auto& r : runs) {
        row.repairs += r.repairs;
        row.deadlocks += r.deadlocks;
    }
    return row;
}

void write_metrics_header(std::ostream& out, const std::vector<std::string>& guarantee_names) {
    out << "env,variant,label,seeds";
    for (const char* c : {"train_reward", "train_success", "train_in_w", "eval_reward", "eval_success",
                          "eval_override", "eval_in_w"})
        out << ',' << c << "_mean," << c << "_se";
    for (const auto& g : guarantee_names) out << ",eval_" << g << "_mean,eval_" << g << "_se";
    out << ",repairs,deadlocks\n";
}

void write_metrics_row(std::ostream& out, const MetricsRow& row) {
    out << row.env << ',' << to_string(row.variant) << ',' << row.label << ',' << row.seeds;
    for (const Stat* s : {&row.train_reward, &row.train_success, &row.train_in_w, &row.eval_reward,
                          &row.eval_success, &row.eval_override, &row.eval_in_w})
        cell(out, *s);
    for (const auto& c : row.compliance) cell(out, c);
    out << ',' << row.repairs << ',' << row.deadlocks << '\n';
}

void write_curves(std::ostream& out, const std::string& variant, const std::vector<RunMetrics>& runs) {
    for (const auto& r : runs)
        for (std::size_t e = 0; e < r.curve_return.size(); ++e)
            out << variant << ',' << r.seed << ',' << e << ',' << num(r.curve_return[e]) << ','
                << (r.curve_success[e] ? 1 : 0) << '\n';
}

std::string format_table(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-22s %20s %14s %20s %14s %14s %14s\n", "Controller", "Train Rew.", "Train Succ.",
                  "Eval Rew.", "Eval Succ.", "Eval Ovrr.", "Eval %W");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-22s %20s %14s %20s %14s %14s %14s\n", r.label.c_str(),
                      pm(r.train_reward).c_str(), pm(r.train_success).c_str(), pm(r.eval_reward).c_str(),
                      pm(r.eval_success).c_str(), pm(r.eval_override).c_str(), pm(r.eval_in_w).c_str());
        out << buf;
    }
    return out.str();
}

namespace {

struct Expect {
    Variant v;
    const char* column;
    const char* expected;
};

// Booleans use a 0.5 threshold; "=1.00" and "=0.00" compare at two decimals.
bool satisfied(const std::string& expected, double x) {
    if (expected == "1") return x >= 0.5;
    if (expected == "0") return x < 0.5;
    if (expected == "=1.00") return x >= 0.995;
    if (expected == "=0.00") return x < 0.005;
    if (expected == "<=0.05") return x <= 0.05;
    if (expected == ">0") return x > 0.0;
    return false;
}

double value(const MetricsRow& r, const std::string& column) {
    if (column == "train_success") return r.train_success.mean;
    if (column == "eval_success") return r.eval_success.mean;
    if (column == "eval_override") return r.eval_override.mean;
    if (column == "eval_in_w") return r.eval_in_w.mean;
    return 0.0;
}

}  // namespace

std::vector<CellCheck> check_pattern(const std::string& env, const std::vector<MetricsRow>& rows) {
    static const Expect minepump[] = {
        {Variant::Symbolic1, "train_success", "1"},  {Variant::Symbolic1, "eval_success", "0"},
        {Variant::Symbolic2, "train_success", "1"},  {Variant::Symbolic2, "eval_success", "1"},
        {Variant::None, "train_success", "0"},       {Variant::None, "eval_success", "0"},
        {Variant::Static1, "train_success", "0"},    {Variant::Static1, "eval_success", "0"},
        {Variant::Static2, "train_success", "0"},    {Variant::Static2, "eval_success", "0"},
        {Variant::StaticStar, "train_success", "1"}, {Variant::StaticStar, "eval_success", "0"},
        {Variant::Adaptive, "train_success", "1"},   {Variant::Adaptive, "eval_success", "1"},
        {Variant::Adaptive, "eval_override", ">0"},
    };
    static const Expect seaquest[] = {
        {Variant::None, "eval_success", "=0.00"},    {Variant::Naive, "train_success", "1"},
        {Variant::Naive, "eval_success", "<=0.05"},  {Variant::Static, "train_success", "1"},
        {Variant::Static, "eval_success", "=0.00"},  {Variant::Repaired, "train_success", "1"},
        {Variant::Repaired, "eval_success", "=1.00"}, {Variant::Repaired, "eval_in_w", "=1.00"},
        {Variant::Adaptive, "train_success", "1"},   {Variant::Adaptive, "eval_success", "=1.00"},
        {Variant::Adaptive, "eval_in_w", "=1.00"},
    };
    std::vector<CellCheck> out;
    auto run = [&](const auto& table) {
        for (const Expect& e : table) {
            CellCheck c;
            c.row = label(e.v);
            c.column = e.column;
            c.expected = e.expected;
            bool found = false;
            for (const auto& r : rows)
                if (r.variant == e.v) {
                    c.actual = value(r, c.column);
                    found = true;
                }
            c.pass = found && satisfied(c.expected, c.actual);
            out.push_back(c);
        }
    };
    if (env == "minepump") run(minepump);
    else run(seaquest);
    return out;
}

}  // namespace gr1shield

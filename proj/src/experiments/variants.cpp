#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gr1shield/experiments.hpp"

namespace gr1shield {

namespace {

struct Names {
    Variant v;
    const char* key;
    const char* label;
};

constexpr Names kNames[] = {
    {Variant::None, "none", "Unshielded"},
    {Variant::Static1, "static-1", "Static Shield 1"},
    {Variant::Static2, "static-2", "Static Shield 2"},
    {Variant::StaticStar, "static-star", "Static Shield (*)"},
    {Variant::Naive, "naive", "Naive Shield"},
    {Variant::Static, "static", "Static Shield"},
    {Variant::Repaired, "repaired", "Repaired Shield"},
    {Variant::Adaptive, "adaptive", "Adaptive Shield"},
    {Variant::Symbolic1, "symb-1", "Static Symb. Ctrl. 1"},
    {Variant::Symbolic2, "symb-2", "Static Symb. Ctrl. 2"},
};

}  // namespace

std::string to_string(Variant v) {
    for (const auto& n : kNames)
        if (n.v == v) return n.key;
    return "?";
}

Variant parse_variant(const std::string& s) {
    for (const auto& n : kNames)
        if (s == n.key) return n.v;
    throw std::invalid_argument("unknown shield variant '" + s + "'");
}

std::string label(Variant v) {
    for (const auto& n : kNames)
        if (n.v == v) return n.label;
    return "?";
}

std::vector<Variant> variants_for(const std::string& env) {
    if (env == "minepump")
        return {Variant::Symbolic1, Variant::Symbolic2, Variant::None,     Variant::Static1,
                Variant::Static2,   Variant::StaticStar, Variant::Adaptive};
    if (env == "seaquest") return {Variant::None, Variant::Naive, Variant::Static, Variant::Repaired, Variant::Adaptive};
    throw std::invalid_argument("unknown environment '" + env + "'");
}

bool valid_for(Variant v, const std::string& env) {
    auto vs = variants_for(env);
    return std::find(vs.begin(), vs.end(), v) != vs.end();
}

std::string shield_spec_file(Variant v, const std::string& env) {
    if (!valid_for(v, env)) throw std::invalid_argument(to_string(v) + " is not a " + env + " variant");
    if (env == "minepump") {
        switch (v) {
            case Variant::Static1: return "minepump_static1.gr1";
            case Variant::Static2: return "minepump_static2.gr1";
            case Variant::Symbolic2: return "minepump_repaired.gr1";
            case Variant::None: return "";
            default: return "minepump.gr1";
        }
    }
    switch (v) {
        case Variant::Naive: return "seaquest_naive.gr1";
        case Variant::Repaired: return "seaquest_repaired.gr1";
        case Variant::None: return "";
        default: return "seaquest.gr1";
    }
}

std::string reference_spec_file(const std::string& env) {
    if (env == "minepump") return "minepump.gr1";
    if (env == "seaquest") return "seaquest.gr1";
    throw std::invalid_argument("unknown environment '" + env + "'");
}

std::vector<std::string> checked_guarantees(const std::string& env) {
    if (env == "minepump") return {"guarantee1", "guarantee2"};
    if (env == "seaquest") return {"guarantee1"};
    throw std::invalid_argument("unknown environment '" + env + "'");
}

void ExperimentConfig::validate() const {
    if (!valid_for(variant, env)) throw std::invalid_argument(to_string(variant) + " is not a " + env + " variant");
    if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
    agent.validate();
}

Stat summarize(const std::vector<double>& xs) {
    Stat s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return s;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double n = static_cast<double>(xs.size());
    s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return s;
}

}  // namespace gr1shield

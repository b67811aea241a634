#include <fstream>
#include <sstream>

#include "gr1shield/shield.hpp"
#include "json.hpp"

namespace gr1shield {

using nlohmann::json;

namespace {

std::string hex(State s) {
    std::ostringstream os;
    os << std::hex << s;
    return os.str();
}

}  // namespace

std::string to_json_line(const TraceRecord& r, const Spec& source) {
    json j;
    j["t"] = r.t;
    j["env_bits"] = hex(r.env_bits);
    j["sys_bits"] = hex(r.sys_bits);
    json values = json::object();
    for (std::size_t i = 0; i < source.vars.size() && i < r.values.size(); ++i)
        values[source.vars[i].name] = r.values[i];
    j["values"] = values;
    j["proposed"] = r.proposed;
    j["chosen"] = r.chosen;
    j["overridden"] = r.overridden;
    j["in_W"] = r.in_W;
    if (r.deadlock) j["deadlock"] = true;
    if (r.violation) j["violation"] = *r.violation;
    return j.dump();
}

TraceRecord parse_trace_line(const std::string& line, const Spec& source) {
    json j = json::parse(line);
    TraceRecord r;
    r.t = j.value("t", std::size_t{0});
    r.env_bits = std::stoull(j.value("env_bits", std::string("0")), nullptr, 16);
    r.sys_bits = std::stoull(j.value("sys_bits", std::string("0")), nullptr, 16);
    r.proposed = j.value("proposed", std::size_t{0});
    r.chosen = j.value("chosen", std::size_t{0});
    r.overridden = j.value("overridden", false);
    r.in_W = j.value("in_W", true);
    r.deadlock = j.value("deadlock", false);
    if (j.contains("violation") && j["violation"].is_string()) r.violation = j["violation"].get<std::string>();
    if (j.contains("values")) {
        const json& v = j["values"];
        r.values.assign(source.vars.size(), 0);
        for (std::size_t i = 0; i < source.vars.size(); ++i) {
            const VarDecl& d = source.vars[i];
            if (!v.contains(d.name)) throw SpecError("trace record lacks a value for '" + d.name + "'");
            const json& x = v[d.name];
            r.values[i] = x.is_boolean() ? (x.get<bool>() ? 1 : 0) : x.get<std::int64_t>();
            if (!d.contains(r.values[i]))
                throw SpecError("trace value " + std::to_string(r.values[i]) + " outside the domain of '" + d.name + "'");
        }
    }
    return r;
}

std::vector<TraceRecord> read_trace(std::istream& in, const Spec& source) {
    std::vector<TraceRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        TraceRecord r = parse_trace_line(line, source);
        if (r.values.empty()) continue;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TraceRecord> load_trace(const std::string& path, const Spec& source) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
    return read_trace(in, source);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records, const Spec& source) {
    for (const auto& r : records) out << to_json_line(r, source) << '\n';
}

std::vector<Assignment> trace_values(const std::vector<TraceRecord>& records) {
    std::vector<Assignment> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.values);
    return out;
}

}  // namespace gr1shield

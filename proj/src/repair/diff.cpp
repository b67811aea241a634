#include <sstream>

#include "gr1shield/repair.hpp"
#include "json.hpp"

namespace gr1shield {

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

std::string unified_diff(const std::string& before, const std::string& after, const std::string& name) {
    const auto a = lines_of(before), b = lines_of(after);
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);

    // ops: ' ' keep, '-' remove, '+' add, with line indices into a or b.
    struct Op {
        char tag;
        std::size_t ai, bi;
    };
    std::vector<Op> ops;
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && a[i] == b[j]) ops.push_back({' ', i++, j++});
        else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) ops.push_back({'-', i++, j});
        else ops.push_back({'+', i, j++});
    }

    const std::size_t context = 3;
    std::ostringstream os;
    bool header = false;
    std::size_t k = 0;
    while (k < ops.size()) {
        if (ops[k].tag == ' ') {
            ++k;
            continue;
        }
        std::size_t start = k >= context ? k - context : 0;
        while (start < k && ops[start].tag != ' ') ++start;
        std::size_t end = k;
        std::size_t quiet = 0;
        while (end < ops.size() && quiet <= 2 * context) {
            quiet = ops[end].tag == ' ' ? quiet + 1 : 0;
            ++end;
        }
        if (quiet > context) end -= quiet - context;
        std::size_t a_start = ops[start].ai, b_start = ops[start].bi, a_len = 0, b_len = 0;
        for (std::size_t t = start; t < end; ++t) {
            if (ops[t].tag != '+') ++a_len;
            if (ops[t].tag != '-') ++b_len;
        }
        if (!header) {
            os << "--- a/" << name << "\n+++ b/" << name << "\n";
            header = true;
        }
        os << "@@ -" << (a_len ? a_start + 1 : a_start) << ',' << a_len << " +" << (b_len ? b_start + 1 : b_start)
           << ',' << b_len << " @@\n";
        for (std::size_t t = start; t < end; ++t) {
            const std::string& text = ops[t].tag == '+' ? b[ops[t].bi] : a[ops[t].ai];
            os << ops[t].tag << text << "\n";
        }
        k = end;
    }
    return os.str();
}

std::string edits_json(const std::vector<Edit>& edits) {
    std::ostringstream os;
    for (const auto& e : edits) {
        nlohmann::json j;
        j["unit"] = e.unit;
        j["edit"] = std::string(to_string(e.kind));
        j["old"] = e.old_formula ? print_formula(e.old_formula) : "";
        j["new"] = e.new_formula ? nlohmann::json(print_formula(e.new_formula)) : nlohmann::json(nullptr);
        j["cost"] = e.cost;
        os << j.dump() << "\n";
    }
    return os.str();
}

}  // namespace gr1shield

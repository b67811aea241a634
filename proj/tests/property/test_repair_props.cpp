#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../support/gen.hpp"
#include "../support/oracle.hpp"
#include "gr1shield/repair.hpp"

using namespace gr1shield;

namespace {

std::vector<FormulaPtr> of_kind(const Spec& s, UnitKind k) {
    std::vector<FormulaPtr> out;
    for (const auto& u : s.units)
        if (u.kind == k) out.push_back(u.formula);
    return out;
}

// Every pair allowed by `strong` is allowed by `weak`, with state units also checked at step 0.
bool pairwise_implies(const Spec& s, const std::vector<FormulaPtr>& strong, const std::vector<FormulaPtr>& weak) {
    oracle::BruteGame g(s);
    const std::uint64_t n = std::uint64_t{1} << s.vars.size();
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b)
            if (g.rho(strong, a, b) && !g.rho(weak, a, b)) return false;
    return true;
}

}  // namespace

TEST_CASE("random repairs are sound and weaken by exhaustive check") {
    gentest::Rng rng(31);
    int repaired = 0, failed = 0, identity = 0;
    for (int i = 0; i < 120; ++i) {
        gentest::SpecOptions o;
        o.env_vars = 2;
        o.sys_vars = static_cast<int>(rng.range(1, 2));
        o.max_safety = 3;
        o.max_justice = 1;
        Spec s = gentest::random_spec(rng, o);
        if (s.units_of(UnitKind::Assume).empty() || !is_realizable(s)) continue;
        auto tr = gentest::random_trace(rng, s, 6);
        RepairLimits limits;
        limits.max_rounds = 8;
        try {
            RepairOutcome out = spec_repair(s, tr, limits);
            if (out.identity()) {
                ++identity;
                CHECK(check_step(tr, s).ok());
                continue;
            }
            ++repaired;
            const Spec& p = out.spec_prime;
            CHECK(out.soundness.ok());
            CHECK(check_step(tr, p).ok());
            CHECK(is_realizable(p));
            CHECK(pairwise_implies(s, of_kind(s, UnitKind::Assume), of_kind(p, UnitKind::Assume)));
            CHECK(pairwise_implies(s, of_kind(s, UnitKind::Guarantee), of_kind(p, UnitKind::Guarantee)));
            RepairOutcome again = spec_repair(p, tr, limits);
            CHECK(again.identity());
        } catch (const RepairError&) {
            ++failed;
        }
    }
    MESSAGE(repaired << " repaired, " << identity << " consistent, " << failed << " without a repair");
    CHECK(repaired >= 20);
}

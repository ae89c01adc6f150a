#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmrcpsp/compact.hpp"
#include "rmrcpsp/instance_gen.hpp"
#include "rmrcpsp/mip/branch_and_bound.hpp"
#include "rmrcpsp/oracle.hpp"
#include "rmrcpsp/psplib.hpp"
#include "support/builders.hpp"
#include "support/example_instance.hpp"
#include "support/lp_reader.hpp"

using namespace rmrcpsp;
using namespace rmrcpsp::testing;

namespace {

mip::BranchAndBoundBackend& backend() {
    static mip::BranchAndBoundBackend instance;
    return instance;
}

Instance worst_case_copy(const Instance& inst) {
    Instance out = inst;
    for (Activity& act : out.activities)
        for (Mode& mode : act.modes) {
            mode.nominal_duration += mode.max_deviation;
            mode.max_deviation = 0;
        }
    return out;
}

} // namespace

TEST_CASE("gamma zero builds a single level and no deviation rows") {
    Instance inst = example_instance();
    CompactBuild build = build_compact(inst, BudgetGamma::for_instance(0, inst));
    for (const auto& per_activity : build.s) CHECK(per_activity.size() == 1);
    for (const auto& c : build.model.constraints())
        CHECK(c.name.rfind("dev_", 0) != 0);
    CompactBuild two = build_compact(inst, BudgetGamma::for_instance(2, inst));
    bool any_dev = false;
    for (const auto& c : two.model.constraints()) any_dev = any_dev || c.name.rfind("dev_", 0) == 0;
    CHECK(any_dev);
}

TEST_CASE("single activity solves to its nominal or worst duration") {
    Instance inst = make_instance({{make_mode(4, 3, {0})}}, {}, {1});
    CompactResult nominal = solve_compact(inst, BudgetGamma::for_instance(0, inst), backend(), 60);
    CHECK(nominal.outcome.status == mip::SolveStatus::Optimal);
    CHECK(nominal.worst.makespan == 4);
    CompactResult robust = solve_compact(inst, BudgetGamma::for_instance(1, inst), backend(), 60);
    CHECK(robust.worst.makespan == 7);
}

TEST_CASE("example instance solves to 11 nominal and 15 at gamma 2") {
    Instance inst = example_instance();
    CompactResult nominal = solve_compact(inst, BudgetGamma::for_instance(0, inst), backend(), 120);
    REQUIRE(nominal.outcome.status == mip::SolveStatus::Optimal);
    CHECK(nominal.worst.makespan == 11);
    CompactResult robust = solve_compact(inst, BudgetGamma::for_instance(2, inst), backend(), 120);
    REQUIRE(robust.outcome.status == mip::SolveStatus::Optimal);
    CHECK(robust.worst.makespan == 15);
    CHECK_FALSE(find_forbidden_set(inst, robust.solution.modes, robust.solution.relation)
                    .has_value());
}

TEST_CASE("compact equals the oracle on random tinies") {
    InstanceGen gen(307);
    for (int trial = 0; trial < 12; ++trial) {
        Instance inst = gen.tiny(gen.range(3, 4), 2);
        int gamma = gen.range(0, 2);
        OracleResult want = brute_force_solve(inst, BudgetGamma::for_instance(gamma, inst));
        CompactResult got =
            solve_compact(inst, BudgetGamma::for_instance(gamma, inst), backend(), 120);
        REQUIRE(got.outcome.status == mip::SolveStatus::Optimal);
        CHECK(got.worst.makespan == want.makespan);
        CHECK_FALSE(
            find_forbidden_set(inst, got.solution.modes, got.solution.relation).has_value());
        CHECK(got.worst.makespan <= upper_bound_N(inst));
    }
}

TEST_CASE("interval case matches a deterministic solve on worst-case durations") {
    InstanceGen gen(311);
    for (int trial = 0; trial < 4; ++trial) {
        Instance inst = gen.tiny(3, 2);
        CompactResult full =
            solve_compact(inst, BudgetGamma::for_instance(inst.n, inst), backend(), 120);
        CompactResult det = solve_compact(worst_case_copy(inst),
                                          BudgetGamma::for_instance(0, inst), backend(), 120);
        REQUIRE(full.outcome.status == mip::SolveStatus::Optimal);
        REQUIRE(det.outcome.status == mip::SolveStatus::Optimal);
        CHECK(full.worst.makespan == det.worst.makespan);
    }
}

TEST_CASE("single-mode instances reduce to the robust RCPSP") {
    InstanceGen gen(313);
    for (int trial = 0; trial < 6; ++trial) {
        Instance inst = gen.tiny(gen.range(3, 4), 1);
        int gamma = gen.range(0, 2);
        OracleResult want = brute_force_solve(inst, BudgetGamma::for_instance(gamma, inst));
        CompactResult got =
            solve_compact(inst, BudgetGamma::for_instance(gamma, inst), backend(), 120);
        REQUIRE(got.outcome.status == mip::SolveStatus::Optimal);
        CHECK(got.worst.makespan == want.makespan);
    }
}

TEST_CASE("build flags do not change the optimum") {
    InstanceGen gen(317);
    for (int trial = 0; trial < 4; ++trial) {
        Instance inst = gen.tiny(3, 2);
        int gamma = gen.range(0, 2);
        BuildOptions plain;
        BuildOptions fidelity;
        fidelity.reductions = false;
        BuildOptions aggregated;
        aggregated.aggregate_bigm = true;
        Time a = solve_compact(inst, BudgetGamma::for_instance(gamma, inst), backend(), 120, plain)
                     .worst.makespan;
        Time b = solve_compact(inst, BudgetGamma::for_instance(gamma, inst), backend(), 120,
                               fidelity)
                     .worst.makespan;
        Time c = solve_compact(inst, BudgetGamma::for_instance(gamma, inst), backend(), 120,
                               aggregated)
                     .worst.makespan;
        CHECK(a == b);
        CHECK(a == c);
    }
}

TEST_CASE("objective is monotone in gamma") {
    InstanceGen gen(331);
    Instance inst = gen.tiny(4, 2);
    Time prev = -1;
    for (int gamma = 0; gamma <= 3; ++gamma) {
        CompactResult res =
            solve_compact(inst, BudgetGamma::for_instance(gamma, inst), backend(), 120);
        REQUIRE(res.outcome.status == mip::SolveStatus::Optimal);
        CHECK(res.worst.makespan >= prev);
        prev = res.worst.makespan;
    }
    CompactResult clamped =
        solve_compact(inst, BudgetGamma::for_instance(inst.n + 5, inst), backend(), 120);
    CompactResult at_n = solve_compact(inst, BudgetGamma::for_instance(inst.n, inst), backend(), 120);
    CHECK(clamped.worst.makespan == at_n.worst.makespan);
}

TEST_CASE("exported LP text reads back with matching structure") {
    Instance inst = example_instance();
    CompactBuild build = build_compact(inst, BudgetGamma::for_instance(1, inst));
    LpFile lp = read_lp(mip::write_lp(build.model));
    CHECK(lp.rows.size() == static_cast<size_t>(build.model.num_constraints()));
    CHECK_FALSE(lp.maximize);
    int s_vars = 0;
    for (const auto& v : build.model.variables())
        if (v.name.rfind("S_", 0) == 0) ++s_vars;
    CHECK(s_vars == inst.num_activities() * 2); // one per activity per level
}

TEST_CASE("solution JSON carries the selection, flows and delayed set") {
    Instance inst = example_instance();
    CompactResult res = solve_compact(inst, BudgetGamma::for_instance(2, inst), backend(), 120);
    std::string json = solution_to_json(inst, res.solution, res.worst, res.outcome, "compact", 2);
    CHECK(json.find("\"worst_case_makespan\": 15") != std::string::npos);
    CHECK(json.find("\"selection\"") != std::string::npos);
    CHECK(json.find("\"flows\"") != std::string::npos);
    CHECK(json.find("\"delayed\"") != std::string::npos);
    CHECK(json.find("\"critical_path\"") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmrcpsp/instance_gen.hpp"
#include "rmrcpsp/oracle.hpp"
#include "support/builders.hpp"
#include "support/example_instance.hpp"

using namespace rmrcpsp;
using namespace rmrcpsp::testing;

TEST_CASE("single activity with one delay") {
    Instance inst = make_instance({{make_mode(3, 2, {1})}}, {}, {1});
    OracleResult res = brute_force_solve(inst, BudgetGamma::for_instance(1, inst));
    CHECK(res.makespan == 5);
    CHECK(res.selection.empty());
}

TEST_CASE("resource conflict forces sequencing") {
    Instance inst = make_instance({{make_mode(3, 0, {3})}, {make_mode(4, 0, {3})}}, {}, {4});
    OracleResult res = brute_force_solve(inst, BudgetGamma::for_instance(0, inst));
    CHECK(res.makespan == 7);
    CHECK(res.selection.size() == 1);
}

TEST_CASE("example instance optima") {
    Instance inst = example_instance();
    SUBCASE("nominal") {
        CHECK(brute_force_solve(inst, BudgetGamma::for_instance(0, inst)).makespan == 11);
    }
    SUBCASE("robust at gamma 2") {
        OracleResult res = brute_force_solve(inst, BudgetGamma::for_instance(2, inst));
        CHECK(res.makespan == 15);
        // The optimum keeps every activity in its first mode and orders the
        // parallel pair {2, 3}; either orientation reaches 15.
        for (int i = 1; i <= inst.n; ++i) CHECK(res.modes[i] == 0);
    }
    SUBCASE("interval case") {
        CHECK(brute_force_solve(inst, BudgetGamma::for_instance(5, inst)).makespan ==
              brute_force_solve(inst, BudgetGamma::for_instance(17, inst)).makespan);
    }
}

TEST_CASE("oracle is monotone in gamma") {
    InstanceGen gen(211);
    for (int trial = 0; trial < 15; ++trial) {
        Instance inst = gen.tiny(gen.range(3, 4), 2);
        Time prev = -1;
        for (int gamma = 0; gamma <= 3; ++gamma) {
            Time value = brute_force_solve(inst, BudgetGamma::for_instance(gamma, inst)).makespan;
            CHECK(value >= prev);
            prev = value;
        }
    }
}

TEST_CASE("parallel driver matches the serial reference") {
    InstanceGen gen(223);
    for (int trial = 0; trial < 25; ++trial) {
        Instance inst = gen.tiny(gen.range(3, 5), 2);
        int gamma = gen.range(0, 2);
        OracleResult serial = brute_force_solve(inst, BudgetGamma::for_instance(gamma, inst));
        OracleResult parallel =
            brute_force_solve_parallel(inst, BudgetGamma::for_instance(gamma, inst));
        CHECK(serial.makespan == parallel.makespan);
        CHECK(serial.modes.mode == parallel.modes.mode);
        CHECK(serial.selection == parallel.selection);
    }
}

TEST_CASE("oracle result certifies its own selection") {
    InstanceGen gen(227);
    for (int trial = 0; trial < 15; ++trial) {
        Instance inst = gen.tiny(gen.range(3, 5), 2);
        OracleResult res = brute_force_solve(inst, BudgetGamma::for_instance(1, inst));
        auto base = transitive_closure(inst.precedences, inst.num_activities());
        auto extended = extend_closure(base, res.selection);
        CHECK_FALSE(find_forbidden_set(inst, res.modes, extended).has_value());
        CHECK(worst_case_longest_path(inst, res.modes, extended, BudgetGamma::for_instance(1, inst))
                  .makespan == res.makespan);
    }
}

TEST_CASE("guard rails reject oversized instances") {
    InstanceGen gen(229);
    Instance inst = gen.psplib_style(10);
    CHECK_THROWS_AS(brute_force_solve(inst, BudgetGamma::for_instance(1, inst)),
                    std::invalid_argument);
}

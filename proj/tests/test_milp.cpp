#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "rmrcpsp/instance_gen.hpp"
#include "rmrcpsp/mip/branch_and_bound.hpp"
#include "rmrcpsp/mip/model.hpp"
#include "rmrcpsp/mip/solve.hpp"
#include "support/lp_reader.hpp"

using namespace rmrcpsp;
using namespace rmrcpsp::mip;

TEST_CASE("builder basics") {
    MipModel model;
    int x = model.add_binary("x");
    model.set_objective(ObjectiveSense::Minimize, {{x, 1.0}});
    CHECK(model.num_variables() == 1);
    CHECK(model.num_constraints() == 0);

    SUBCASE("duplicate variable names are rejected") {
        CHECK_THROWS_AS(model.add_binary("x"), std::invalid_argument);
    }
    SUBCASE("constraints referencing unknown variables are rejected") {
        CHECK_THROWS_AS(model.add_constraint("c", {{7, 1.0}}, Sense::LessEqual, 1.0),
                        std::invalid_argument);
    }
    SUBCASE("duplicate constraint names are rejected") {
        model.add_constraint("c", {{x, 1.0}}, Sense::LessEqual, 1.0);
        CHECK_THROWS_AS(model.add_constraint("c", {{x, 1.0}}, Sense::LessEqual, 2.0),
                        std::invalid_argument);
    }
    SUBCASE("crossed bounds are rejected") {
        CHECK_THROWS_AS(model.add_variable("bad", 2.0, 1.0, false), std::invalid_argument);
    }
}

TEST_CASE("write_lp golden output") {
    MipModel model;
    int x = model.add_variable("x", 0.0, kInfinity, true);
    model.add_constraint("c1", {{x, 1.0}}, Sense::GreaterEqual, 1.0);
    model.set_objective(ObjectiveSense::Minimize, {{x, 1.0}});
    CHECK(write_lp(model) ==
          "Minimize\n"
          " obj: x\n"
          "Subject To\n"
          " c1: x >= 1\n"
          "Bounds\n"
          "Generals\n"
          " x\n"
          "End\n");
}

TEST_CASE("write_lp emits a Maximize header") {
    MipModel model;
    int x = model.add_variable("x", 0.0, 2.5, false);
    model.set_objective(ObjectiveSense::Maximize, {{x, 3.0}});
    std::string text = write_lp(model);
    CHECK(text.rfind("Maximize", 0) == 0);
    CHECK(text.find("3 x") != std::string::npos);
    CHECK(text.find("0 <= x <= 2.5") != std::string::npos);
}

TEST_CASE("write_lp handles an empty model") {
    MipModel model;
    std::string text = write_lp(model);
    CHECK(text.find("Minimize") == 0);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("write_lp is deterministic") {
    auto build = [] {
        MipModel model;
        int a = model.add_binary("a");
        int b = model.add_variable("b", -1.0, 4.0, false);
        model.add_constraint("r1", {{a, 2.0}, {b, -3.0}}, Sense::LessEqual, 5.0);
        model.set_objective(ObjectiveSense::Minimize, {{a, 1.0}, {b, 1.0}});
        return write_lp(model);
    };
    CHECK(build() == build());
}

TEST_CASE("emitted LP text reads back with identical coefficients") {
    InstanceGen gen(101);
    for (int trial = 0; trial < 20; ++trial) {
        MipModel model;
        const int n = gen.range(1, 8);
        for (int j = 0; j < n; ++j) {
            double lo = gen.range(-3, 0);
            double hi = lo + gen.range(0, 5);
            model.add_variable("v" + std::to_string(j), lo, hi, gen.range(0, 1) == 1);
        }
        const int m = gen.range(1, 6);
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < n; ++j)
                if (gen.range(0, 1)) terms.emplace_back(j, gen.range(-4, 4));
            if (terms.empty()) terms.emplace_back(0, 1.0);
            Sense sense = static_cast<Sense>(gen.range(0, 2));
            model.add_constraint("r" + std::to_string(r), terms, sense, gen.range(-5, 5));
        }
        std::vector<std::pair<int, double>> obj;
        for (int j = 0; j < n; ++j) obj.emplace_back(j, gen.range(-3, 3));
        model.set_objective(ObjectiveSense::Minimize, obj);

        testing::LpFile lp = testing::read_lp(write_lp(model));
        REQUIRE(lp.rows.size() == static_cast<size_t>(model.num_constraints()));
        for (int r = 0; r < m; ++r) {
            const Constraint& want = model.constraints()[static_cast<size_t>(r)];
            const testing::LpFile::Row& got = lp.rows[static_cast<size_t>(r)];
            CHECK(got.name == want.name);
            CHECK(got.rhs == doctest::Approx(want.rhs));
            std::map<std::string, double> expected;
            for (auto [j, c] : want.terms)
                if (c != 0.0) expected[model.variables()[static_cast<size_t>(j)].name] += c;
            std::erase_if(expected, [](const auto& kv) { return kv.second == 0.0; });
            std::map<std::string, double> cleaned = got.coefficients;
            std::erase_if(cleaned, [](const auto& kv) { return kv.second == 0.0; });
            REQUIRE(cleaned.size() == expected.size());
            for (const auto& [name, coef] : expected) CHECK(cleaned.at(name) == doctest::Approx(coef));
        }
    }
}

TEST_CASE("bundled backend solves, reports infeasible and unbounded") {
    BranchAndBoundBackend backend;
    SUBCASE("min x subject to x >= 3, integer") {
        MipModel model;
        int x = model.add_variable("x", 0.0, kInfinity, true);
        model.add_constraint("c", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
        model.set_objective(ObjectiveSense::Minimize, {{x, 1.0}});
        SolveOutcome out = solve(model, backend, 60.0);
        CHECK(out.status == SolveStatus::Optimal);
        CHECK(out.objective == doctest::Approx(3.0));
        CHECK(out.values[0] == doctest::Approx(3.0));
    }
    SUBCASE("x >= 3 and x <= 2 is infeasible") {
        MipModel model;
        int x = model.add_variable("x", 0.0, kInfinity, false);
        model.add_constraint("lo", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
        model.add_constraint("hi", {{x, 1.0}}, Sense::LessEqual, 2.0);
        model.set_objective(ObjectiveSense::Minimize, {{x, 1.0}});
        CHECK(solve(model, backend, 60.0).status == SolveStatus::Infeasible);
    }
    SUBCASE("maximize an unbounded variable") {
        MipModel model;
        int x = model.add_variable("x", 0.0, kInfinity, false);
        int y = model.add_variable("y", 0.0, kInfinity, false);
        model.add_constraint("c", {{y, 1.0}}, Sense::LessEqual, 5.0);
        model.set_objective(ObjectiveSense::Maximize, {{x, 1.0}});
        CHECK(solve(model, backend, 60.0).status == SolveStatus::Unbounded);
    }
}

namespace {

// 0-1 knapsack by exhaustive enumeration; independent of the LP machinery.
double knapsack_best(const std::vector<double>& value, const std::vector<double>& weight,
                     double cap) {
    const int n = static_cast<int>(value.size());
    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        double v = 0, w = 0;
        for (int j = 0; j < n; ++j)
            if (mask & (1 << j)) {
                v += value[static_cast<size_t>(j)];
                w += weight[static_cast<size_t>(j)];
            }
        if (w <= cap) best = std::max(best, v);
    }
    return best;
}

} // namespace

TEST_CASE("bundled backend matches knapsack enumeration") {
    InstanceGen gen(113);
    BranchAndBoundBackend backend;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = gen.range(4, 11);
        std::vector<double> value(static_cast<size_t>(n)), weight(static_cast<size_t>(n));
        MipModel model;
        std::vector<std::pair<int, double>> obj, row;
        for (int j = 0; j < n; ++j) {
            value[static_cast<size_t>(j)] = gen.range(1, 20);
            weight[static_cast<size_t>(j)] = gen.range(1, 12);
            int var = model.add_binary("x" + std::to_string(j));
            obj.emplace_back(var, value[static_cast<size_t>(j)]);
            row.emplace_back(var, weight[static_cast<size_t>(j)]);
        }
        double cap = gen.range(5, 40);
        model.add_constraint("cap", row, Sense::LessEqual, cap);
        model.set_objective(ObjectiveSense::Maximize, obj);
        model.objective_integral = true;
        SolveOutcome out = solve(model, backend, 60.0);
        REQUIRE(out.status == SolveStatus::Optimal);
        CHECK(out.objective == doctest::Approx(knapsack_best(value, weight, cap)));
    }
}

TEST_CASE("optimal solutions satisfy every constraint within 1e-6") {
    InstanceGen gen(131);
    BranchAndBoundBackend backend;
    for (int trial = 0; trial < 15; ++trial) {
        MipModel model;
        const int n = gen.range(2, 6);
        std::vector<int> vars;
        for (int j = 0; j < n; ++j)
            vars.push_back(model.add_variable("v" + std::to_string(j), 0.0, gen.range(1, 6),
                                              gen.range(0, 1) == 1));
        for (int r = 0; r < gen.range(1, 5); ++r) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < n; ++j)
                if (gen.range(0, 1)) terms.emplace_back(vars[static_cast<size_t>(j)], gen.range(1, 4));
            if (terms.empty()) continue;
            model.add_constraint("r" + std::to_string(r), terms, Sense::LessEqual,
                                 gen.range(2, 20));
        }
        std::vector<std::pair<int, double>> obj;
        for (int j = 0; j < n; ++j) obj.emplace_back(vars[static_cast<size_t>(j)], gen.range(-5, 5));
        model.set_objective(ObjectiveSense::Minimize, obj);
        SolveOutcome out = solve(model, backend, 60.0);
        REQUIRE(out.status == SolveStatus::Optimal);
        for (const Constraint& c : model.constraints()) {
            double act = 0;
            for (auto [j, a] : c.terms) act += a * out.values[static_cast<size_t>(j)];
            if (c.sense == Sense::LessEqual) CHECK(act <= c.rhs + 1e-6);
            if (c.sense == Sense::GreaterEqual) CHECK(act >= c.rhs - 1e-6);
            if (c.sense == Sense::Equal) CHECK(std::abs(act - c.rhs) <= 1e-6);
        }
    }
}

TEST_CASE("warm start is accepted when feasible and ignored when not") {
    BranchAndBoundBackend backend;
    MipModel model;
    int x = model.add_variable("x", 0.0, 10.0, true);
    model.add_constraint("c", {{x, 1.0}}, Sense::GreaterEqual, 4.0);
    model.set_objective(ObjectiveSense::Minimize, {{x, 1.0}});
    SolveOutcome with_good = solve(model, backend, 60.0, std::vector<double>{7.0});
    CHECK(with_good.status == SolveStatus::Optimal);
    CHECK(with_good.objective == doctest::Approx(4.0));
    SolveOutcome with_bad = solve(model, backend, 60.0, std::vector<double>{1.0});
    CHECK(with_bad.objective == doctest::Approx(4.0));
}

TEST_CASE("backend factory") {
    CHECK(make_backend("bnb")->name() == "bnb");
    CHECK(make_backend("")->name() == "bnb");
    CHECK(make_backend("cmd:python3 x.py")->name() == "cmd:python3 x.py");
    CHECK_THROWS_AS(make_backend("gurobi"), BackendUnavailable);
}

TEST_CASE("subprocess backend speaks the JSON protocol") {
    std::string command = std::string("python3 ") + RMRCPSP_BACKEND_SCRIPT;
    auto backend = make_subprocess_backend(command);
    MipModel model;
    int x = model.add_variable("x", 0.0, kInfinity, true);
    int y = model.add_variable("y", 0.0, 4.0, false);
    model.add_constraint("c1", {{x, 1.0}, {y, 1.0}}, Sense::GreaterEqual, 5.5);
    model.set_objective(ObjectiveSense::Minimize, {{x, 2.0}, {y, 1.0}});
    SolveOutcome out = solve(model, *backend, 60.0);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(7.5)); // x = 2, y = 3.5
    CHECK(out.values[0] == doctest::Approx(2.0));

    SUBCASE("infeasible models round-trip as a status, not an error") {
        MipModel bad;
        int z = bad.add_variable("z", 0.0, 1.0, false);
        bad.add_constraint("c", {{z, 1.0}}, Sense::GreaterEqual, 2.0);
        bad.set_objective(ObjectiveSense::Minimize, {{z, 1.0}});
        CHECK(solve(bad, *backend, 60.0).status == SolveStatus::Infeasible);
    }
}

TEST_CASE("a missing backend executable raises BackendUnavailable") {
    auto backend = make_subprocess_backend("/nonexistent/solver_binary_xyz");
    MipModel model;
    int x = model.add_variable("x", 0.0, 1.0, false);
    model.set_objective(ObjectiveSense::Minimize, {{x, 1.0}});
    CHECK_THROWS_AS(solve(model, *backend, 10.0), BackendUnavailable);
}

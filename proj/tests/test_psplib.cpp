#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmrcpsp/instance_gen.hpp"
#include "rmrcpsp/psplib.hpp"
#include "support/builders.hpp"

using namespace rmrcpsp;

namespace {

std::string data_path(const std::string& name) {
    return std::string(RMRCPSP_TEST_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("parse_mm reads the j10 fixture") {
    Instance inst = parse_mm_file(data_path("mm/fixture_j10.mm"));
    CHECK(inst.n == 10);
    CHECK(inst.num_activities() == 12);
    CHECK(inst.renewable_caps == std::vector<int>{12, 13});
    CHECK(inst.nonrenewable_caps == std::vector<int>{45, 40});
    CHECK(validate(inst).ok());

    // Hand-read rows: job 3 mode 2 and job 11 mode 3.
    const Mode& job3_mode2 = inst.activities[2].modes[1];
    CHECK(job3_mode2.nominal_duration == 4);
    CHECK(job3_mode2.max_deviation == 0);
    CHECK(job3_mode2.renewable_req == std::vector<int>{0, 4});
    CHECK(job3_mode2.nonrenewable_req == std::vector<int>{0, 4});
    const Mode& job11_mode3 = inst.activities[10].modes[2];
    CHECK(job11_mode3.nominal_duration == 7);
    CHECK(job11_mode3.renewable_req == std::vector<int>{2, 2});
    CHECK(job11_mode3.nonrenewable_req == std::vector<int>{1, 1});

    // Job 1 maps to the dummy source with successors 2, 3, 4 -> activities 1, 2, 3.
    bool has01 = false;
    for (auto [a, b] : inst.precedences) has01 = has01 || (a == 0 && b == 1);
    CHECK(has01);
}

TEST_CASE("parse_mm reads the j20 fixture") {
    Instance inst = parse_mm_file(data_path("mm/fixture_j20.mm"));
    CHECK(inst.n == 20);
    CHECK(validate(inst).ok());
    CHECK(inst.activities[1].modes.size() == 3);
}

TEST_CASE("parse_mm reads the edge-case fixture with wrapped successor lines") {
    Instance inst = parse_mm_file(data_path("mm/fixture_edge.mm"));
    CHECK(inst.n == 1);
    CHECK(inst.num_renewable() == 1);
    CHECK(inst.num_nonrenewable() == 0);
    CHECK(inst.activities[1].modes.size() == 2);
    CHECK(inst.activities[1].modes[1].nominal_duration == 0);
    CHECK(validate(inst).ok());
}

TEST_CASE("canonical JSON is byte-stable against the committed goldens") {
    for (const std::string name : {"fixture_j10", "fixture_j20", "fixture_edge"}) {
        Instance inst = parse_mm_file(data_path("mm/" + name + ".mm"));
        CHECK(instance_to_canonical_json(inst) == slurp(data_path("golden/" + name + ".json")));
    }
}

TEST_CASE("parse then re-serialize round-trips all numeric content") {
    for (const std::string name : {"mm/fixture_j10.mm", "mm/fixture_j20.mm", "mm/fixture_edge.mm"}) {
        Instance first = parse_mm_file(data_path(name));
        std::istringstream again(write_mm(first));
        Instance second = parse_mm(again, first.name);
        CHECK(instance_to_canonical_json(first) == instance_to_canonical_json(second));
    }
    InstanceGen gen(3);
    for (int trial = 0; trial < 10; ++trial) {
        Instance inst = gen.psplib_style(10);
        inst.name = "roundtrip";
        std::istringstream text(write_mm(inst));
        Instance back = parse_mm(text, "roundtrip");
        CHECK(instance_to_canonical_json(inst) == instance_to_canonical_json(back));
    }
}

TEST_CASE("apply_deviation_rule") {
    Instance inst = testing::make_instance(
        {{testing::make_mode(10, 0, {1})}, {testing::make_mode(0, 0, {1})},
         {testing::make_mode(1, 0, {1})}},
        {{1, 2}, {2, 3}}, {2});
    Rational factor = Rational::from_decimal_string("0.7");
    Instance out = apply_deviation_rule(inst, factor);
    CHECK(out.activities[1].modes[0].max_deviation == 7);
    CHECK(out.activities[2].modes[0].max_deviation == 0);
    CHECK(out.activities[3].modes[0].max_deviation == 0);
    CHECK(out.activities[0].modes[0].max_deviation == 0);

    SUBCASE("factor zero restores the deterministic instance") {
        Instance zero = apply_deviation_rule(out, Rational::from_decimal_string("0"));
        for (const Activity& act : zero.activities)
            for (const Mode& m : act.modes) CHECK(m.max_deviation == 0);
    }
    SUBCASE("monotone in the factor") {
        InstanceGen gen(17);
        Instance base = gen.psplib_style(10);
        const char* factors[] = {"0", "0.3", "0.5", "0.7", "1", "1.5"};
        Instance prev = apply_deviation_rule(base, Rational::from_decimal_string(factors[0]));
        for (int f = 1; f < 6; ++f) {
            Instance next = apply_deviation_rule(base, Rational::from_decimal_string(factors[f]));
            for (int i = 0; i < base.num_activities(); ++i)
                for (size_t m = 0; m < base.activities[static_cast<size_t>(i)].modes.size(); ++m)
                    CHECK(next.activities[static_cast<size_t>(i)].modes[m].max_deviation >=
                          prev.activities[static_cast<size_t>(i)].modes[m].max_deviation);
            prev = next;
        }
    }
    SUBCASE("exact rational arithmetic avoids float artifacts") {
        // 0.7 * 10 must floor to exactly 7 for every scale.
        for (long long d : {10, 100, 1000, 10000}) {
            Instance big = testing::make_instance({{testing::make_mode(d, 0, {1})}}, {}, {1});
            Instance ruled = apply_deviation_rule(big, Rational::from_decimal_string("0.7"));
            CHECK(ruled.activities[1].modes[0].max_deviation == d * 7 / 10);
        }
    }
}

TEST_CASE("load_instance_set") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "rmrcpsp_set_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    InstanceGen gen(29);
    for (const char* name : {"b.mm", "a.mm", "c.mm"}) {
        std::ofstream out(dir / name);
        out << write_mm(gen.psplib_style(10));
    }

    SUBCASE("three valid files load in sorted name order") {
        InstanceSet set = load_instance_set(dir.string());
        REQUIRE(set.instances.size() == 3);
        CHECK(set.failures.empty());
        CHECK(set.instances[0].first == "a.mm");
        CHECK(set.instances[1].first == "b.mm");
        CHECK(set.instances[2].first == "c.mm");
    }
    SUBCASE("a corrupt file is recorded, not fatal") {
        std::ofstream(dir / "broken.mm") << "not a psplib file\n";
        InstanceSet set = load_instance_set(dir.string());
        CHECK(set.instances.size() == 3);
        REQUIRE(set.failures.size() == 1);
        CHECK(set.failures[0].first == "broken.mm");
    }
    SUBCASE("empty directory loads nothing") {
        fs::path empty = dir / "empty";
        fs::create_directories(empty);
        InstanceSet set = load_instance_set(empty.string());
        CHECK(set.instances.empty());
        CHECK(set.failures.empty());
    }
    SUBCASE("missing directory throws") {
        CHECK_THROWS((void)load_instance_set((dir / "nope").string()));
    }
    fs::remove_all(dir);
}

TEST_CASE("doubly constrained resources are rejected with a clear error") {
    Instance base = InstanceGen(31).psplib_style(10);
    std::string text = write_mm(base);
    auto at = text.find("doubly constrained        :  0");
    REQUIRE(at != std::string::npos);
    text.replace(at, std::string("doubly constrained        :  0").size(),
                 "doubly constrained        :  1");
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_mm(in), ParseError);
}

TEST_CASE("malformed input errors carry line numbers") {
    std::string text = slurp(data_path("mm/fixture_edge.mm"));
    SUBCASE("non-integer token") {
        std::string broken = text;
        auto at = broken.find("  2      1     4       1");
        REQUIRE(at != std::string::npos);
        broken.replace(at, std::string("  2      1     4       1").size(),
                       "  2      1     X       1");
        std::istringstream in(broken);
        try {
            parse_mm(in);
            FAIL("expected ParseError");
        } catch (const ParseError& err) {
            CHECK(err.line > 0);
            CHECK(std::string(err.what()).find("integer") != std::string::npos);
        }
    }
    SUBCASE("mode count mismatch between sections") {
        std::string broken = text;
        auto at = broken.find("   2        2          1           3");
        REQUIRE(at != std::string::npos);
        broken.replace(at, std::string("   2        2          1           3").size(),
                       "   2        3          1           3");
        std::istringstream in(broken);
        CHECK_THROWS_AS(parse_mm(in), ParseError);
    }
}

TEST_CASE("rational decimal parsing") {
    CHECK(Rational::from_decimal_string("0.7").num == 7);
    CHECK(Rational::from_decimal_string("0.7").den == 10);
    CHECK(Rational::from_decimal_string("1").num == 1);
    CHECK(Rational::from_decimal_string("2.25").floor_times(8) == 18);
    CHECK_THROWS(Rational::from_decimal_string("abc"));
    CHECK_THROWS(Rational::from_decimal_string("1.2.3"));
}

#include <catch2/catch_amalgamated.hpp>

#include "mbqc/json_io.hpp"

using namespace mbqc;

TEST_CASE("matrix and state round trips preserve entries") {
    Rng rng(21);
    Mat m(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rng.gaussian_cx();
    const Mat back = mat_from_json(mat_to_json(m));
    CHECK(max_abs_diff(m, back) == 0.0);

    QuditRegister reg(3, 2);
    for (int k = 0; k < 9; ++k) reg.amps(k) = rng.gaussian_cx();
    const QuditRegister reg2 = state_from_json(state_to_json(reg));
    CHECK((reg.amps - reg2.amps).cwiseAbs().maxCoeff() == 0.0);

    const KrausSet k = su_family(3).kraus;
    const KrausSet k2 = kraus_from_json(kraus_to_json(k));
    REQUIRE(k2.ops.size() == k.ops.size());
    for (size_t i = 0; i < k.ops.size(); ++i) REQUIRE(max_abs_diff(k.ops[i], k2.ops[i]) == 0.0);
}

TEST_CASE("resource specs parse from the documented forms") {
    {
        const auto spec = resource_spec_from_json(json::parse(
            R"({"family":"cluster","d":5,"x":2,"N":4,"bc":"pbc"})"));
        CHECK(spec.family == "cluster");
        CHECK(spec.d == 5);
        CHECK(spec.x == 2);
        CHECK(spec.sites == 4);
        CHECK(spec.bc == Boundary::pbc);
    }
    CHECK(resource_spec_from_json(json::parse(R"({"family":"su","N":3})")).n == 3);
    CHECK(resource_spec_from_json(json::parse(R"({"family":"so-fund","l":2})")).ell == 2);
    CHECK(resource_spec_from_json(json::parse(R"({"family":"so-adj","l":2})")).ell == 2);
    CHECK(resource_spec_from_json(json::parse(R"({"family":"sp","m":2})")).m == 2);
    CHECK(resource_spec_from_json(json::parse(R"({"family":"spin1"})")).family == "spin1");
    CHECK_THROWS_AS(resource_spec_from_json(json::parse(R"({"family":"qqq"})")), std::invalid_argument);

    // resolve: wrong sp rank is rejected before any plan machinery runs
    ResourceSpec bad;
    bad.family = "sp";
    bad.m = 0;
    CHECK_THROWS_AS(resolve_family(bad), std::invalid_argument);
}

TEST_CASE("plans parse and execute") {
    const json jplan = json::parse(R"({
        "family": {"family": "spin1"},
        "steps": [
            {"intent": "gate", "generator": "pauli", "axis": "X", "theta": 0.3},
            {"intent": "wire"}
        ],
        "mode": "enumerate"
    })");
    const MeasurementPlan plan = plan_from_json(jplan);
    REQUIRE(plan.steps.size() == 2);
    const auto branches = run_plan_enumerate(plan);
    REQUIRE(branches.size() == 9);
    double total = 0.0;
    for (const auto& br : branches) total += br.probability;
    CHECK(total == Catch::Approx(1.0).margin(1e-12));

    const json jmub = json::parse(R"({
        "family": {"family": "su", "N": 3},
        "steps": [{"intent": "gate", "generator": "mub", "op": 0, "eigenstate": 1, "theta": 0.4}]
    })");
    const auto plan2 = plan_from_json(jmub);
    CHECK(run_plan_enumerate(plan2).size() == 8);

    const json jproj = json::parse(R"({
        "family": {"family": "so-fund", "l": 2},
        "steps": [{"intent": "projection"}]
    })");
    const auto plan3 = plan_from_json(jproj);
    const auto branches3 = run_plan_enumerate(plan3);
    int hits = 0;
    for (const auto& br : branches3)
        if (br.classes[0] == StepClass::projection_hit) ++hits;
    CHECK(hits == 2);
}

TEST_CASE("suite reports serialize with pass/fail status") {
    const SuiteReport rep = suite_aklt(spin1_family(), 10);
    const json j = suite_report_to_json(rep);
    CHECK(j.at("status") == "pass");
    CHECK(j.at("checks").size() == rep.checks.size());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("expected"));
        CHECK(c.contains("observed"));
    }
}

TEST_CASE("report bodies are deterministic for fixed seeds") {
    const SuiteReport r1 = suite_engine(spin1_family(), 29);
    const SuiteReport r2 = suite_engine(spin1_family(), 29);
    CHECK(suite_report_to_json(r1).dump() == suite_report_to_json(r2).dump());
}

TEST_CASE("MBQC_BUDGET overrides the amplitude guard") {
    ::setenv("MBQC_BUDGET", "1234", 1);
    CHECK(amplitude_budget_from_env() == 1234);
    ::setenv("MBQC_BUDGET", "garbage", 1);
    CHECK(amplitude_budget_from_env() == kDefaultAmplitudeBudget);
    ::unsetenv("MBQC_BUDGET");
    CHECK(amplitude_budget_from_env() == kDefaultAmplitudeBudget);
}

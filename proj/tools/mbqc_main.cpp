// Command-line front end: build resource states and Kraus sets, run the
// verification suites, execute measurement plans, and print the family
// property table. All output is JSON; the exit code is 0 exactly when every
// check passes.

#include "mbqc/json_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using mbqc::json;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open output file: " + out_path);
        os << j.dump(2) << "\n";
    }
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_build(const mbqc::ResourceSpec& spec, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    json report{{"command", "build"}, {"spec", mbqc::resource_spec_to_json(spec)}};
    if (spec.family == "cluster") {
        const auto cs = mbqc::ClusterSpec::symmetric(spec.d, spec.x, spec.sites, spec.bc);
        const auto state = mbqc::build_cluster(cs, mbqc::amplitude_budget_from_env());
        report["state"] = mbqc::state_to_json(state);
        report["amplitudes"] = state.dim();
        report["norm"] = state.amps.norm();
    } else {
        const auto fam = mbqc::resolve_family(spec);
        report["kraus"] = mbqc::kraus_to_json(fam.kraus);
        report["phys_dim"] = fam.phys_dim;
        report["bond_dim"] = fam.bond_dim;
        report["channel_deviation"] = mbqc::validate_channel(fam.kraus).deviation;
    }
    report["timing_ms"] = elapsed_ms(t0);
    emit(report, out_path);
    return 0;
}

int cmd_verify(const std::string& suite, const mbqc::ResourceSpec& spec, int max_sites,
               const std::string& out_path, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t budget = mbqc::amplitude_budget_from_env();
    std::vector<mbqc::SuiteReport> reports;
    if (suite == "cluster") {
        reports.push_back(mbqc::suite_cluster(spec.d, spec.x, max_sites, mbqc::kEps, budget));
    } else if (suite == "aklt") {
        reports.push_back(mbqc::suite_aklt(mbqc::resolve_family(spec), 50, seed));
    } else if (suite == "engine") {
        reports.push_back(mbqc::suite_engine(mbqc::resolve_family(spec), seed, budget));
    } else if (suite == "all") {
        reports = mbqc::suite_all(budget);  // includes the family property table
    } else {
        throw CLI::ValidationError("unknown suite: " + suite);
    }
    bool all_pass = true;
    json body = json::array();
    for (const auto& rep : reports) {
        all_pass = all_pass && rep.all_pass();
        body.push_back(mbqc::suite_report_to_json(rep));
    }
    json report{{"command", "verify"},
                {"suite", suite},
                {"status", all_pass ? "pass" : "fail"},
                {"seed", seed},
                {"reports", std::move(body)},
                {"timing_ms", elapsed_ms(t0)}};
    emit(report, out_path);
    return all_pass ? 0 : 1;
}

int cmd_run(const std::string& plan_path, const std::string& mode, std::uint64_t seed,
            const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    std::ifstream is(plan_path);
    if (!is) throw std::runtime_error("cannot open plan file: " + plan_path);
    json jplan;
    try {
        jplan = json::parse(is);
    } catch (const json::parse_error& err) {
        throw std::runtime_error("plan parse error at byte " + std::to_string(err.byte) + ": " + err.what());
    }
    const auto plan = mbqc::plan_from_json(jplan);
    json report{{"command", "run"}, {"plan", plan_path}, {"mode", mode}, {"seed", seed}};
    if (mode == "enumerate") {
        const auto branches = mbqc::run_plan_enumerate(plan);
        double total = 0.0;
        int active = 0, clean = 0, hits = 0;
        json table = json::array();
        for (const auto& br : branches) {
            total += br.probability;
            for (auto c : br.classes) {
                if (c == mbqc::StepClass::active_gate) ++active;
                if (c == mbqc::StepClass::clean_identity) ++clean;
                if (c == mbqc::StepClass::projection_hit) ++hits;
            }
            table.push_back(mbqc::branch_to_json(plan.family, br));
        }
        report["branches"] = std::move(table);
        report["probability_total"] = total;
        report["step_outcomes"] = json{{"active", active}, {"clean", clean}, {"projection", hits}};
        if (plan.steps.size() == 1) {
            long long act = 0;
            for (const auto& br : branches)
                if (br.classes[0] == mbqc::StepClass::active_gate) ++act;
            const mbqc::Fraction f(act, static_cast<long long>(branches.size()));
            report["active_fraction"] = std::to_string(f.num) + "/" + std::to_string(f.den);
        }
    } else if (mode == "sample") {
        const auto br = mbqc::run_plan_sample(plan, seed);
        report["trajectory"] = mbqc::branch_to_json(plan.family, br);
    } else {
        throw CLI::ValidationError("mode must be enumerate or sample");
    }
    report["timing_ms"] = elapsed_ms(t0);
    emit(report, out_path);
    return 0;
}

int cmd_table(const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = mbqc::family_property_table();
    json body = json::array();
    bool all = true;
    for (const auto& row : rows) {
        all = all && row.match;
        body.push_back(json{{"family", row.family},
                            {"on_site_dim", row.on_site_dim},
                            {"virtual_dim", row.virtual_dim},
                            {"byproduct", row.byproduct},
                            {"census", std::to_string(row.census.num) + "/" + std::to_string(row.census.den)},
                            {"closed_form",
                             std::to_string(row.closed_form.num) + "/" + std::to_string(row.closed_form.den)},
                            {"match", row.match}});
    }
    json report{{"command", "table1"},
                {"status", all ? "pass" : "fail"},
                {"rows", std::move(body)},
                {"timing_ms", elapsed_ms(t0)}};
    emit(report, out_path);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurement-based computation on symmetric matrix product states"};
    app.require_subcommand(1);

    mbqc::ResourceSpec spec;
    std::string out_path;
    std::string suite = "all";
    std::string plan_path;
    std::string mode = "enumerate";
    std::uint64_t seed = 1;
    int max_sites = 5;
    double tolerance = 1e-9;

    auto add_family_flags = [&](CLI::App* cmd) {
        cmd->add_option("--family", spec.family, "spin1 | su | so-fund | so-adj | sp | cluster");
        cmd->add_option("--d", spec.d, "cluster qudit dimension");
        cmd->add_option("--x", spec.x, "cluster entangling order");
        cmd->add_option_function<int>(
            "--N",
            [&](int v) {
                spec.n = v;      // su(N) rank
                spec.sites = v;  // cluster chain length
            },
            "su(N) rank / cluster chain length");
        cmd->add_option("--sites", spec.sites, "cluster chain length (overrides --N)");
        cmd->add_option("--l", spec.ell, "so(2l+1) parameter");
        cmd->add_option("--m", spec.m, "sp(2n) with n = 2^m");
        cmd->add_option_function<std::string>(
            "--bc", [&](const std::string& v) { spec.bc = v == "pbc" ? mbqc::Boundary::pbc : mbqc::Boundary::obc; },
            "obc | pbc");
    };

    auto* build = app.add_subcommand("build", "construct a state or Kraus-set JSON");
    add_family_flags(build);
    build->add_option("--out", out_path, "output file (stdout when omitted)");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "cluster | aklt | engine | all")->required();
    add_family_flags(verify);
    verify->add_option("--max-sites", max_sites, "largest chain length in the cluster suite");
    verify->add_option("--seed", seed, "seed for sampled checks");
    verify->add_option("--tolerance", tolerance, "accepted deviation (informational)");
    verify->add_option("--out", out_path, "output file");

    auto* run = app.add_subcommand("run", "execute a measurement plan");
    run->add_option("--plan", plan_path, "plan JSON path")->required();
    run->add_option("--mode", mode, "enumerate | sample");
    run->add_option("--seed", seed, "trajectory seed");
    run->add_option("--out", out_path, "output file");

    auto* table = app.add_subcommand("table1", "family property table with closed forms");
    table->add_option("--out", out_path, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(spec, out_path);
        if (verify->parsed()) return cmd_verify(suite, spec, max_sites, out_path, seed);
        if (run->parsed()) return cmd_run(plan_path, mode, seed, out_path);
        if (table->parsed()) return cmd_table(out_path);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}

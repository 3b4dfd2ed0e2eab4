#ifndef MBQC_JSON_IO_HPP
#define MBQC_JSON_IO_HPP

#include "mbqc/suites.hpp"

#include <json.hpp>

#include <string>

// JSON schema used by the command-line front end and by file interchange:
// complex numbers as [re, im] pairs, matrices row-major. Reports use ordered
// keys so identical invocations produce identical bodies.

namespace mbqc {

using json = nlohmann::ordered_json;

inline json complex_to_json(const cx& z) { return json::array({z.real(), z.imag()}); }

inline cx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json mat_to_json(const Mat& m) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(complex_to_json(m(r, c)));
    return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline Mat mat_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != dim * dim)
        throw std::invalid_argument("matrix entries length must be dim^2");
    Mat m(dim, dim);
    int p = 0;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = complex_from_json(entries[p++]);
    return m;
}

inline json vec_to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
    return out;
}

inline Vec vec_from_json(const json& j) {
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = complex_from_json(j[static_cast<size_t>(k)]);
    return v;
}

inline json kraus_to_json(const KrausSet& k) {
    json ops = json::array();
    for (const Mat& a : k.ops) ops.push_back(mat_to_json(a));
    return json{{"phys_dim", k.phys_dim}, {"bond_dim", k.bond_dim}, {"weight", k.weight}, {"ops", std::move(ops)}};
}

inline KrausSet kraus_from_json(const json& j) {
    KrausSet k;
    k.phys_dim = j.at("phys_dim").get<int>();
    k.bond_dim = j.at("bond_dim").get<int>();
    k.weight = j.at("weight").get<double>();
    for (const auto& op : j.at("ops")) k.ops.push_back(mat_from_json(op));
    if (static_cast<int>(k.ops.size()) != k.phys_dim)
        throw std::invalid_argument("Kraus set must hold phys_dim operators");
    return k;
}

inline json state_to_json(const QuditRegister& reg) {
    return json{{"d", reg.d}, {"sites", reg.sites}, {"amps", vec_to_json(reg.amps)}};
}

inline QuditRegister state_from_json(const json& j) {
    QuditRegister reg(j.at("d").get<int>(), j.at("sites").get<int>());
    const Vec amps = vec_from_json(j.at("amps"));
    if (amps.size() != reg.dim()) throw std::invalid_argument("state amplitude count mismatch");
    reg.amps = amps;
    return reg;
}

inline ResourceSpec resource_spec_from_json(const json& j) {
    ResourceSpec spec;
    spec.family = j.at("family").get<std::string>();
    if (spec.family == "cluster") {
        spec.d = j.at("d").get<int>();
        spec.x = j.at("x").get<int>();
        if (j.contains("N")) spec.sites = j.at("N").get<int>();
        if (j.contains("bc")) spec.bc = j.at("bc").get<std::string>() == "pbc" ? Boundary::pbc : Boundary::obc;
    } else if (spec.family == "su") {
        spec.n = j.at("N").get<int>();
    } else if (spec.family == "so-fund" || spec.family == "so-adj") {
        spec.ell = j.at("l").get<int>();
    } else if (spec.family == "sp") {
        spec.m = j.at("m").get<int>();
    } else if (spec.family != "spin1") {
        throw std::invalid_argument("unknown family: " + spec.family);
    }
    return spec;
}

inline json resource_spec_to_json(const ResourceSpec& spec) {
    json j{{"family", spec.family}};
    if (spec.family == "cluster") {
        j["d"] = spec.d;
        j["x"] = spec.x;
        j["N"] = spec.sites;
        j["bc"] = spec.bc == Boundary::pbc ? "pbc" : "obc";
    } else if (spec.family == "su") {
        j["N"] = spec.n;
    } else if (spec.family == "so-fund" || spec.family == "so-adj") {
        j["l"] = spec.ell;
    } else if (spec.family == "sp") {
        j["m"] = spec.m;
    }
    return j;
}

// Plan steps:
//   {"intent":"wire"}
//   {"intent":"gate","generator":"pauli","axis":"X","theta":0.3}
//   {"intent":"gate","generator":"mub","op":0,"eigenstate":1,"theta":0.3}
//   {"intent":"gate","generator":"so","a":1,"b":2,"theta":0.3}
//   {"intent":"gate","generator":"word","index":4,"theta":0.3}
//   {"intent":"projection"}                      (the family projection basis)
//   {"intent":"wire","rotation":{...matrix...}}  (explicit rotation)
inline PlanStep plan_step_from_json(const ResourceFamily& fam, const json& j) {
    const std::string intent = j.value("intent", "wire");
    if (j.contains("rotation")) {
        const Mat rot = mat_from_json(j.at("rotation"));
        const StepIntent si = intent == "gate"         ? StepIntent::gate
                              : intent == "projection" ? StepIntent::projection
                                                       : StepIntent::wire;
        return rotation_step(rot, si, "explicit rotation");
    }
    if (intent == "wire") return wire_step(fam);
    if (intent == "projection") {
        const ProjectionBasisResult proj = projection_basis(fam);
        PlanStep step = rotation_step(proj.rotation, StepIntent::projection, "projection basis");
        return step;
    }
    if (intent != "gate") throw std::invalid_argument("unknown step intent: " + intent);
    const std::string gen = j.at("generator").get<std::string>();
    const double theta = j.at("theta").get<double>();
    if (gen == "pauli") return elementary_gate_plan(fam, GateSpec::pauli_axis(j.at("axis").get<std::string>()[0], theta));
    if (gen == "mub") return elementary_gate_plan(fam, GateSpec::mub(j.at("op").get<int>(), j.at("eigenstate").get<int>(), theta));
    if (gen == "so") return elementary_gate_plan(fam, GateSpec::so_pair(j.at("a").get<int>(), j.at("b").get<int>(), theta));
    if (gen == "word") return elementary_gate_plan(fam, GateSpec::word_index(j.at("index").get<int>(), theta));
    throw std::invalid_argument("unknown generator kind: " + gen);
}

inline MeasurementPlan plan_from_json(const json& j) {
    MeasurementPlan plan;
    const ResourceSpec spec = resource_spec_from_json(j.at("family"));
    plan.family = resolve_family(spec);
    if (j.contains("input")) plan.input = vec_from_json(j.at("input"));
    for (const auto& step : j.at("steps")) plan.steps.push_back(plan_step_from_json(plan.family, step));
    return plan;
}

inline json branch_to_json(const ResourceFamily& fam, const BranchRecord& br) {
    json classes = json::array();
    for (StepClass c : br.classes) classes.push_back(to_string(c));
    json word;
    if (br.word.resolved) {
        word = json{{"word", br.word.index < 0 ? "I" : fam.word_group.labels[br.word.index]},
                    {"phase", complex_to_json(br.word.phase)}};
    } else {
        word = json{{"word", nullptr}};
    }
    return json{{"outcomes", br.outcomes},
                {"probability", br.probability},
                {"classes", std::move(classes)},
                {"byproduct", std::move(word)},
                {"net", mat_to_json(br.net)}};
}

inline json check_to_json(const Check& c) {
    return json{{"name", c.name},
                {"status", c.pass ? "pass" : "fail"},
                {"deviation", c.deviation},
                {"expected", c.expected},
                {"observed", c.observed}};
}

inline json suite_report_to_json(const SuiteReport& rep) {
    json checks = json::array();
    for (const Check& c : rep.checks) checks.push_back(check_to_json(c));
    return json{{"suite", rep.suite},
                {"spec", rep.spec},
                {"status", rep.all_pass() ? "pass" : "fail"},
                {"checks", std::move(checks)}};
}

}  // namespace mbqc

#endif  // MBQC_JSON_IO_HPP

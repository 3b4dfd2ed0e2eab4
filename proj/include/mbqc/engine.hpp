#ifndef MBQC_ENGINE_HPP
#define MBQC_ENGINE_HPP

#include "mbqc/aklt.hpp"
#include "mbqc/cluster.hpp"
#include "mbqc/linalg.hpp"
#include "mbqc/mps.hpp"
#include "mbqc/operator_algebra.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

// Correlation-space simulation of measurement-based computation: rotated-basis
// measurements induce operator sets on the bond space; branches are enumerated
// (or sampled) with exact probabilities, each induced operator is classified
// as clean byproduct / active gate / projection hit, and byproduct words are
// tracked in normal form over the full word group of the bond space.

namespace mbqc {

// ---------------------------------------------------------------------------
// Adjoint lift

// Physical-space rotation representing conjugation by a bond-space unitary V:
// U(i,j) = tr(W_j^dag V^dag W_i V)/chi, so that sum_j U(i,j) W_j = V^dag W_i V.
// On Hermitian word sets this coincides with tr(W_i^dag V W_j V^dag)/chi.
// Throws if conjugation by V leaks outside the span of the word set.
inline Mat adjoint_lift(const Mat& v, const OperatorBasis& words, double leak_tol = 1e-7) {
    const int chi = words.dim;
    if (v.rows() != chi || v.cols() != chi) throw std::invalid_argument("adjoint_lift: dimension mismatch");
    if (!is_unitary(v, 1e-7)) throw std::invalid_argument("adjoint_lift: V must be unitary");
    const int n = words.size();
    Mat u(n, n);
    std::vector<Mat> conj(n);
    for (int i = 0; i < n; ++i) conj[i] = v.adjoint() * words.elems[i] * v;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u(i, j) = hs_inner(words.elems[j], conj[i]) / static_cast<double>(chi);
    for (int i = 0; i < n; ++i) {
        Mat residual = conj[i];
        for (int j = 0; j < n; ++j) residual -= u(i, j) * words.elems[j];
        if (max_abs(residual) > leak_tol)
            throw std::runtime_error("adjoint_lift: leakage - V does not act within the word span");
    }
    if (!is_unitary(u, leak_tol)) throw std::runtime_error("adjoint_lift: lifted block is not unitary");
    return u;
}

// ---------------------------------------------------------------------------
// Resource families beyond the AKLT constructors

// Blocked qudit cluster family (two sites per step); byproduct words are the
// shift/clock words of the bond space.
inline ResourceFamily cluster_family(int d, int x) {
    ResourceFamily fam;
    fam.tag = "cluster(" + std::to_string(d) + "," + std::to_string(x) + ")";
    fam.kraus = cluster_blocked_kraus(d, x);
    fam.phys_dim = fam.kraus.phys_dim;
    fam.bond_dim = fam.kraus.bond_dim;
    fam.byproduct_basis = weyl_basis(d);
    detail::attach_word_group(fam, detail::WordGroup::weyl);
    return fam;
}

// Per-site family of the uniform chain C_d(x,x): Kraus A_s = F_x P_s.
inline ResourceFamily cluster_site_family(int d, int x) {
    if (std::gcd(x, d) != 1) throw std::invalid_argument("cluster_site_family: gcd(x,d) must be 1");
    ResourceFamily fam;
    fam.tag = "cluster-site(" + std::to_string(d) + "," + std::to_string(x) + ")";
    fam.phys_dim = d;
    fam.bond_dim = d;
    fam.kraus.phys_dim = d;
    fam.kraus.bond_dim = d;
    fam.kraus.weight = 1.0 / std::sqrt(static_cast<double>(d));
    const Mat f = fourier_k(d, x);
    for (int s = 0; s < d; ++s) {
        Mat p = Mat::Zero(d, d);
        p(s, s) = 1.0;
        fam.kraus.ops.push_back(f * p);
    }
    fam.byproduct_basis = weyl_basis(d);
    detail::attach_word_group(fam, detail::WordGroup::weyl);
    return fam;
}

// ---------------------------------------------------------------------------
// Plans

enum class StepIntent { wire, gate, projection };
enum class StepClass { clean_identity, active_gate, projection_hit, other };

inline const char* to_string(StepClass c) {
    switch (c) {
        case StepClass::clean_identity: return "clean-identity";
        case StepClass::active_gate: return "active-gate";
        case StepClass::projection_hit: return "projection-hit";
        case StepClass::other: return "other";
    }
    return "?";
}

struct PlanStep {
    StepIntent intent = StepIntent::wire;
    Mat rotation;  // unitary on the on-site physical space
    std::string label;
    // Present for steps built from an elementary bond-space gate V = exp(i*angle*G):
    bool has_generator = false;
    Mat generator;          // Hermitian G
    double angle = 0.0;     // signed angle, V = exp(i * angle * G)
    bool adaptive = false;  // flip the angle when the pending byproduct anticommutes with G
};

struct MeasurementPlan {
    ResourceFamily family;
    std::vector<PlanStep> steps;
    Vec input;  // bond-space input state; defaults to |0>

    Vec input_or_default() const {
        if (input.size() == family.bond_dim) return input / input.norm();
        Vec v = Vec::Zero(family.bond_dim);
        v(0) = 1.0;
        return v;
    }
};

inline PlanStep wire_step(const ResourceFamily& fam) {
    PlanStep s;
    s.intent = StepIntent::wire;
    s.rotation = Mat::Identity(fam.phys_dim, fam.phys_dim);
    s.label = "wire";
    return s;
}

inline PlanStep rotation_step(const Mat& rotation, StepIntent intent, std::string label) {
    PlanStep s;
    s.intent = intent;
    s.rotation = rotation;
    s.label = std::move(label);
    return s;
}

// Measurement in a basis rotated by W sends A_i to sum_j W(i,j) A_j.
inline std::vector<Mat> induced_operators(const KrausSet& k, const Mat& w, double eps = 1e-7) {
    if (w.rows() != k.phys_dim || w.cols() != k.phys_dim)
        throw std::invalid_argument("induced_operators: rotation dimension mismatch");
    if (!is_unitary(w, eps)) throw std::invalid_argument("induced_operators: rotation must be unitary");
    std::vector<Mat> out(k.phys_dim, Mat::Zero(k.bond_dim, k.bond_dim));
    for (int i = 0; i < k.phys_dim; ++i)
        for (int j = 0; j < k.phys_dim; ++j)
            if (std::abs(w(i, j)) > 0.0) out[i] += w(i, j) * k.ops[j];
    return out;
}

struct Classification {
    StepClass cls = StepClass::other;
    int word_index = -2;  // matched word-group element for clean outcomes (-1 = identity)
    cx word_phase = 1.0;
    int rank = 0;
    double scale = 0.0;  // uniform singular value
};

// Classifies an induced operator: phase x word (clean), a multiple of some
// other unitary (active gate), byproduct x projector of deficient rank
// (projection hit), or anything else. Singular values thresholded at 1e-8.
inline Classification classify_operator(const Mat& a, const OperatorBasis& word_group, double eps = 1e-8) {
    Classification res;
    const Eigen::VectorXd sv = singular_values(a);
    const double top = sv(0);
    res.scale = top;
    if (top < eps) return res;  // zero operator: "other"
    const double cut = eps * top;
    int rank = 0;
    bool flat = true;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cut) {
            ++rank;
            if (std::abs(sv(k) - top) > 1e-7 * top) flat = false;
        }
    }
    res.rank = rank;
    if (!flat) return res;
    if (rank == a.rows()) {
        const Mat unit = a / top;
        const Mat id = Mat::Identity(a.rows(), a.cols());
        for (int k = -1; k < word_group.size(); ++k) {
            const Mat& cand = k < 0 ? id : word_group.elems[k];
            const auto [ph, dev] = phase_fit(unit, cand);
            if (dev < 1e-7) {
                res.cls = StepClass::clean_identity;
                res.word_index = k;
                res.word_phase = ph;
                return res;
            }
        }
        res.cls = StepClass::active_gate;
        return res;
    }
    res.cls = StepClass::projection_hit;
    return res;
}

struct BranchRecord {
    std::vector<int> outcomes;
    double probability = 0.0;
    Mat net;              // product of induced operators, first step applied first
    ByproductWord word;   // accumulated byproduct in normal form (when resolvable)
    std::vector<StepClass> classes;
    std::vector<int> signs;  // adaptive angle sign used at each step
    bool anomaly = false;    // an operator fell outside the declared intents
};

namespace detail {

// +1 commute, -1 anticommute, 0 neither.
inline int commute_sign(const Mat& a, const Mat& b, double eps = 1e-9) {
    const Mat ab = a * b;
    const Mat ba = b * a;
    if (max_abs_diff(ab, ba) < eps) return 1;
    if (max_abs(ab + ba) < eps) return -1;
    return 0;
}

}  // namespace detail

inline Mat effective_rotation(const ResourceFamily& fam, const PlanStep& step, int sign) {
    if (sign >= 0 || !step.has_generator) return step.rotation;
    return adjoint_lift(exp_i_hermitian(step.generator, -step.angle), fam.byproduct_basis);
}

namespace detail {

struct StepOperators {
    std::vector<Mat> induced;
    std::vector<Classification> cls;
};

inline StepOperators build_step_operators(const ResourceFamily& fam, const PlanStep& step, int sign) {
    StepOperators ops;
    ops.induced = induced_operators(fam.kraus, effective_rotation(fam, step, sign));
    ops.cls.reserve(ops.induced.size());
    for (const Mat& a : ops.induced) ops.cls.push_back(classify_operator(a, fam.word_group));
    return ops;
}

// Folds one step outcome into the accumulated byproduct word.
inline void fold_byproduct(const ResourceFamily& fam, const ByproductTable& table, const PlanStep& step,
                           const Classification& cls, int outcome, ByproductWord& word, bool& anomaly) {
    switch (cls.cls) {
        case StepClass::clean_identity: {
            ByproductWord w = compose_left(table, cls.word_index, word);
            w.phase *= cls.word_phase;
            word = w;
            break;
        }
        case StepClass::active_gate:
            if (step.intent == StepIntent::gate && fam.words_match_kraus()) {
                ByproductWord w = compose_left(table, fam.word_slot[outcome], word);
                w.phase *= fam.word_slot_phase[outcome];
                word = w;
            } else {
                word.resolved = false;
            }
            break;
        case StepClass::projection_hit:
            word.resolved = false;
            if (step.intent != StepIntent::projection) anomaly = true;
            break;
        case StepClass::other:
            word.resolved = false;
            anomaly = true;
            break;
    }
}

}  // namespace detail

// Enumerates every outcome sequence of the plan with exact probabilities
// ||A~ ... A~ |in>||^2. Adaptive gate steps flip their angle when the pending
// byproduct word anticommutes with the step generator, so every active branch
// enacts the same logical gate.
inline std::vector<BranchRecord> run_plan_enumerate(const MeasurementPlan& plan) {
    const ResourceFamily& fam = plan.family;
    const int d = fam.phys_dim;
    const ByproductTable table = byproduct_closure_table(fam.word_group);
    const Vec input = plan.input_or_default();

    std::vector<std::array<std::optional<detail::StepOperators>, 2>> cache(plan.steps.size());
    auto step_ops = [&](size_t s, int sign) -> const detail::StepOperators& {
        auto& slot = cache[s][sign < 0 ? 1 : 0];
        if (!slot) slot = detail::build_step_operators(fam, plan.steps[s], sign);
        return *slot;
    };

    std::vector<BranchRecord> records;
    struct Frame {
        Vec state;
        Mat net;
        ByproductWord word;
        std::vector<int> outcomes;
        std::vector<StepClass> classes;
        std::vector<int> signs;
        bool anomaly = false;
    };
    auto rec = [&](auto&& self, const Frame& frame, size_t s) -> void {
        if (s == plan.steps.size()) {
            BranchRecord br;
            br.outcomes = frame.outcomes;
            br.probability = frame.state.squaredNorm();
            br.net = frame.net;
            br.word = frame.word;
            br.classes = frame.classes;
            br.signs = frame.signs;
            br.anomaly = frame.anomaly;
            records.push_back(std::move(br));
            return;
        }
        const PlanStep& step = plan.steps[s];
        int sign = 1;
        if (step.adaptive && step.has_generator && frame.word.resolved) {
            const Mat w = byproduct_matrix(fam.word_group, frame.word);
            sign = detail::commute_sign(w, step.generator);
            if (sign == 0) sign = 1;
        }
        const detail::StepOperators& ops = step_ops(s, sign);
        for (int i = 0; i < d; ++i) {
            Frame next;
            next.state = ops.induced[i] * frame.state;
            next.net = ops.induced[i] * frame.net;
            next.outcomes = frame.outcomes;
            next.outcomes.push_back(i);
            next.classes = frame.classes;
            next.classes.push_back(ops.cls[i].cls);
            next.signs = frame.signs;
            next.signs.push_back(sign);
            next.anomaly = frame.anomaly;
            next.word = frame.word;
            detail::fold_byproduct(fam, table, step, ops.cls[i], i, next.word, next.anomaly);
            self(self, next, s + 1);
        }
    };
    Frame root;
    root.state = input;
    root.net = Mat::Identity(fam.bond_dim, fam.bond_dim);
    root.word = ByproductWord::identity();
    rec(rec, root, 0);
    return records;
}

// Draws a single trajectory; identical seeds give identical trajectories.
inline BranchRecord run_plan_sample(const MeasurementPlan& plan, std::uint64_t seed) {
    const ResourceFamily& fam = plan.family;
    const ByproductTable table = byproduct_closure_table(fam.word_group);
    Rng rng(seed);
    Vec state = plan.input_or_default();
    BranchRecord br;
    br.net = Mat::Identity(fam.bond_dim, fam.bond_dim);
    br.word = ByproductWord::identity();
    for (const PlanStep& step : plan.steps) {
        int sign = 1;
        if (step.adaptive && step.has_generator && br.word.resolved) {
            const Mat w = byproduct_matrix(fam.word_group, br.word);
            sign = detail::commute_sign(w, step.generator);
            if (sign == 0) sign = 1;
        }
        const detail::StepOperators ops = detail::build_step_operators(fam, step, sign);
        const double norm2 = state.squaredNorm();
        double u = rng.uniform();
        int outcome = fam.phys_dim - 1;
        double acc = 0.0;
        for (int i = 0; i < fam.phys_dim; ++i) {
            acc += (ops.induced[i] * state).squaredNorm() / norm2;
            if (u < acc) {
                outcome = i;
                break;
            }
        }
        state = ops.induced[outcome] * state;
        br.net = ops.induced[outcome] * br.net;
        br.outcomes.push_back(outcome);
        br.classes.push_back(ops.cls[outcome].cls);
        br.signs.push_back(sign);
        detail::fold_byproduct(fam, table, step, ops.cls[outcome], outcome, br.word, br.anomaly);
    }
    br.probability = state.squaredNorm();
    return br;
}

// ---------------------------------------------------------------------------
// Elementary gates

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

// The d+1 maximally noncommuting words {Z, X, XZ, X^2 Z, ..., X^(d-1) Z}; for
// prime d their eigenbases are mutually unbiased.
inline Mat mub_operator(int d, int k) {
    check_qudit_dim(d);
    if (k < 0 || k > d) throw std::invalid_argument("mub_operator: index out of range");
    if (k == 0) return weyl_z(d);
    if (k == 1) return weyl_x(d);
    return weyl(d, k - 1, 1);
}

// Eigenprojectors of a nonidentity word M with M^d = c*1: P_k projects on the
// eigenvalue mu * omega^k where mu is the principal d-th root of c.
inline std::vector<Mat> word_eigenprojectors(const Mat& m, int d) {
    const Mat md = mat_power(m, d);
    const cx c = md.trace() / static_cast<double>(d);
    if (max_abs_diff(md, c * Mat::Identity(d, d)) > 1e-9)
        throw std::invalid_argument("word_eigenprojectors: M^d is not a scalar");
    const cx mu = std::polar(1.0, std::arg(c) / d);
    std::vector<Mat> projectors;
    for (int k = 0; k < d; ++k) {
        Mat p = Mat::Zero(d, d);
        for (int t = 0; t < d; ++t) {
            const cx lam = mu * omega_root(d, k);
            p += mat_power(m, t) / std::pow(lam, t);
        }
        p /= static_cast<double>(d);
        projectors.push_back(p);
    }
    return projectors;
}

struct GateSpec {
    enum class Kind { mub, so_pair, word_index, pauli_axis };
    Kind kind = Kind::pauli_axis;
    int mub_op = 0;      // 0..d
    int eigenstate = 0;  // 0..d-1
    int a = 1, b = 2;    // 1-based Clifford indices for so-type gates
    int index = 0;       // index into the family's virtual algebra (sp)
    char axis = 'X';     // spin-1 rotation axis
    double theta = 0.0;

    static GateSpec mub(int op, int eigenstate, double theta) {
        GateSpec g;
        g.kind = Kind::mub;
        g.mub_op = op;
        g.eigenstate = eigenstate;
        g.theta = theta;
        return g;
    }
    static GateSpec so_pair(int a, int b, double theta) {
        GateSpec g;
        g.kind = Kind::so_pair;
        g.a = a;
        g.b = b;
        g.theta = theta;
        return g;
    }
    static GateSpec word_index(int index, double theta) {
        GateSpec g;
        g.kind = Kind::word_index;
        g.index = index;
        g.theta = theta;
        return g;
    }
    static GateSpec pauli_axis(char axis, double theta) {
        GateSpec g;
        g.kind = Kind::pauli_axis;
        g.axis = axis;
        g.theta = theta;
        return g;
    }
};

// Builds the measurement step inducing the elementary bond-space gate:
//   su(N):  V = exp(+i theta |lambda><lambda|), lambda an eigenstate of a word
//           from the maximally noncommuting family (rank-one spectrum required;
//           guaranteed for prime N);
//   so:     V = exp(-i theta Gamma^ab);
//   sp:     V = exp(-i theta N_l);
//   spin-1: V = exp(-i theta sigma_axis).
inline PlanStep elementary_gate_plan(const ResourceFamily& fam, const GateSpec& spec) {
    PlanStep step;
    step.intent = StepIntent::gate;
    const int chi = fam.bond_dim;
    switch (spec.kind) {
        case GateSpec::Kind::mub: {
            const Mat m = mub_operator(chi, spec.mub_op);
            const auto projectors = word_eigenprojectors(m, chi);
            const Mat p = projectors.at(spec.eigenstate);
            if (numeric_rank(p) != 1) {
                if (!is_prime(chi))
                    throw std::invalid_argument(
                        "elementary_gate_plan: degenerate word spectrum (non-prime dimension)");
                throw std::runtime_error("elementary_gate_plan: eigenprojector is not rank one");
            }
            step.generator = p;
            step.angle = spec.theta;
            step.label = "mub(" + std::to_string(spec.mub_op) + "," + std::to_string(spec.eigenstate) + ")";
            break;
        }
        case GateSpec::Kind::so_pair: {
            const std::string label = "G" + std::to_string(spec.a) + std::to_string(spec.b);
            int pos = -1;
            for (size_t k = 0; k < fam.virtual_labels.size(); ++k)
                if (fam.virtual_labels[k] == label) pos = static_cast<int>(k);
            if (pos < 0) throw std::invalid_argument("elementary_gate_plan: generator outside the family algebra");
            step.generator = fam.virtual_algebra[pos];
            step.angle = -spec.theta;
            step.label = label;
            break;
        }
        case GateSpec::Kind::word_index: {
            if (spec.index < 0 || spec.index >= static_cast<int>(fam.virtual_algebra.size()))
                throw std::invalid_argument("elementary_gate_plan: generator outside the family algebra");
            step.generator = fam.virtual_algebra[spec.index];
            step.angle = -spec.theta;
            step.label = fam.virtual_labels.empty() ? "N" + std::to_string(spec.index)
                                                    : fam.virtual_labels[spec.index];
            break;
        }
        case GateSpec::Kind::pauli_axis: {
            step.generator = pauli(spec.axis);
            step.angle = -spec.theta;
            step.label = std::string(1, spec.axis) + "-rotation";
            break;
        }
    }
    step.has_generator = true;
    const Mat v = exp_i_hermitian(step.generator, step.angle);
    step.rotation = adjoint_lift(v, fam.byproduct_basis);
    // adaptive sign flips make sense when every byproduct word either commutes
    // or anticommutes with the generator
    step.adaptive = true;
    for (const Mat& w : fam.word_group.elems)
        if (detail::commute_sign(w, step.generator) == 0) step.adaptive = false;
    return step;
}

// Every available elementary gate target of a family, for census sweeps.
inline std::vector<GateSpec> elementary_gate_targets(const ResourceFamily& fam, double theta) {
    std::vector<GateSpec> targets;
    if (fam.tag.rfind("su(", 0) == 0) {
        for (int op = 0; op <= fam.bond_dim; ++op) {
            const auto projectors = word_eigenprojectors(mub_operator(fam.bond_dim, op), fam.bond_dim);
            if (numeric_rank(projectors[0]) != 1) continue;  // degenerate (non-prime) word
            for (int j = 0; j < fam.bond_dim; ++j) targets.push_back(GateSpec::mub(op, j, theta));
        }
    } else if (fam.tag == "spin1") {
        for (char ax : {'X', 'Y', 'Z'}) targets.push_back(GateSpec::pauli_axis(ax, theta));
    } else {
        for (int k = 0; k < static_cast<int>(fam.virtual_algebra.size()); ++k)
            targets.push_back(GateSpec::word_index(k, theta));
    }
    return targets;
}

struct CensusRow {
    std::string label;
    Fraction fraction;  // active outcomes / physical dimension
    int active = 0;
    int clean = 0;
    int other = 0;
    std::vector<StepClass> classes;
};

// Single-step branch census for one elementary gate: counts outcomes whose
// induced operator is a genuine gate rather than phase x byproduct.
inline CensusRow success_census(const ResourceFamily& fam, const GateSpec& spec) {
    const PlanStep step = elementary_gate_plan(fam, spec);
    const auto induced = induced_operators(fam.kraus, step.rotation);
    CensusRow row;
    row.label = step.label;
    for (const Mat& a : induced) {
        const Classification c = classify_operator(a, fam.word_group);
        row.classes.push_back(c.cls);
        if (c.cls == StepClass::active_gate) ++row.active;
        else if (c.cls == StepClass::clean_identity) ++row.clean;
        else ++row.other;
    }
    row.fraction = Fraction(row.active, fam.phys_dim);
    return row;
}

// Census across every elementary generator; the fraction must not depend on
// the generator.
inline Fraction success_census_all(const ResourceFamily& fam, double theta = 0.37,
                                   std::vector<CensusRow>* rows_out = nullptr) {
    const auto targets = elementary_gate_targets(fam, theta);
    if (targets.empty()) throw std::invalid_argument("success_census_all: family has no elementary gates");
    std::optional<Fraction> frac;
    for (const GateSpec& g : targets) {
        CensusRow row = success_census(fam, g);
        if (row.other != 0) throw std::runtime_error("success_census_all: non-unitary outcome in a gate census");
        if (!frac) frac = row.fraction;
        else if (!(*frac == row.fraction))
            throw std::runtime_error("success_census_all: fraction depends on the generator");
        if (rows_out) rows_out->push_back(std::move(row));
    }
    return *frac;
}

// ---------------------------------------------------------------------------
// Family symmetry

struct FamilySymmetryReport {
    int samples = 0;
    double max_deviation = 0.0;
    bool pass = false;
};

// Samples one-parameter subgroup elements V = exp(-i theta G) with G drawn
// from the family's virtual Lie algebra, lifts each to the on-site rotation,
// and checks the symmetry condition sum_j u_ij A_j = e^{i phi} V^dag A_i V.
inline FamilySymmetryReport verify_family_symmetry(const ResourceFamily& fam, int samples,
                                                   std::uint64_t seed = 23, double eps = 1e-7) {
    if (fam.virtual_algebra.empty())
        throw std::invalid_argument("verify_family_symmetry: family has no virtual algebra");
    Rng rng(seed);
    FamilySymmetryReport rep;
    rep.samples = samples;
    const int chi = fam.bond_dim;
    for (int s = 0; s < samples; ++s) {
        Mat g = Mat::Zero(chi, chi);
        for (const Mat& basis_elem : fam.virtual_algebra) g += rng.gaussian() * basis_elem;
        const double nrm = std::sqrt(std::abs(hs_inner(g, g).real()));
        if (nrm < 1e-12) continue;
        g /= nrm;
        const double theta = rng.uniform(-3.0, 3.0);
        const Mat v = exp_i_hermitian(g, -theta);
        const Mat u = adjoint_lift(v, fam.byproduct_basis);
        const SymmetryReport sym = check_symmetry_condition(fam.kraus, u, v, eps);
        rep.max_deviation = std::max(rep.max_deviation, sym.deviation);
    }
    rep.pass = rep.max_deviation < eps;
    return rep;
}

// ---------------------------------------------------------------------------
// Projections

struct ProjectionBasisResult {
    Mat rotation;                     // on-site rotation W
    std::vector<Mat> induced;         // transformed Kraus operators
    std::vector<std::string> labels;  // labels of the underlying Kraus order
    Fraction fraction;                // projection hits / physical dimension
    int hits = 0;
    int expected_rank = 0;
    std::vector<StepClass> classes;
    KrausSet kraus;                   // the Kraus order the rotation refers to
};

namespace detail {

inline void pair_block(Mat& w, int p, int q) {
    const double s = 1.0 / std::sqrt(2.0);
    w(p, p) = s;
    w(p, q) = cx(0.0, s);
    w(q, p) = s;
    w(q, q) = cx(0.0, -s);
}

}  // namespace detail

// Rotated bases whose induced operators contain byproduct x projector outcomes:
//   su(d): W = diag(F, ..., F, 1_(d-1)) over the X-major word order
//          {X, XZ, ..., XZ^(d-1), X^2, ..., Z, ..., Z^(d-1)}, giving {X^i P_j, Z^k};
//   so / sp / spin-1: sigma+/- combinations of word pairs differing in one factor.
inline ProjectionBasisResult projection_basis(const ResourceFamily& fam) {
    ProjectionBasisResult res;
    const int dim = fam.phys_dim;
    res.kraus = fam.kraus;
    res.labels = fam.byproduct_basis.labels;
    Mat w = Mat::Identity(dim, dim);

    if (fam.tag.rfind("su(", 0) == 0) {
        const int d = fam.bond_dim;
        KrausSet ordered;
        ordered.phys_dim = fam.phys_dim;
        ordered.bond_dim = fam.bond_dim;
        ordered.weight = fam.kraus.weight;
        std::vector<std::string> labels;
        for (int i = 1; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                ordered.ops.push_back(fam.kraus.weight * weyl(d, i, j));
                labels.push_back(weyl_label(i, j));
            }
        for (int k = 1; k < d; ++k) {
            ordered.ops.push_back(fam.kraus.weight * weyl(d, 0, k));
            labels.push_back(weyl_label(0, k));
        }
        res.kraus = std::move(ordered);
        res.labels = std::move(labels);
        const Mat f = fourier_k(d, 1);
        for (int blk = 0; blk < d - 1; ++blk) w.block(blk * d, blk * d, d, d) = f;
        res.expected_rank = 1;  // X^i P_j outcomes
    } else {
        const auto& labels = fam.byproduct_basis.labels;
        auto find_label = [&](const std::string& s) -> int {
            for (size_t k = 0; k < labels.size(); ++k)
                if (labels[k] == s) return static_cast<int>(k);
            return -1;
        };
        int pairs = 0;
        if (fam.tag == "spin1") {
            detail::pair_block(w, find_label("X"), find_label("Y"));
            pairs = 1;
        } else if (fam.tag.rfind("so-fund", 0) == 0) {
            detail::pair_block(w, 0, 1);  // G1 = X..X, G2 = X..XY
            pairs = 1;
        } else if (fam.tag.rfind("so-adj", 0) == 0) {
            // G_{a,2l} with G_{a,2l+1}, a = 1..2l-1
            const int ell = static_cast<int>((std::sqrt(1.0 + 8.0 * dim) - 1.0) / 4.0 + 0.5);
            for (int a = 1; a <= 2 * ell - 1; ++a) {
                const int p = find_label("G" + std::to_string(a) + std::to_string(2 * ell));
                const int q = find_label("G" + std::to_string(a) + std::to_string(2 * ell + 1));
                if (p < 0 || q < 0) throw std::runtime_error("projection_basis: missing spinor labels");
                detail::pair_block(w, p, q);
                ++pairs;
            }
        } else if (fam.tag.rfind("sp(", 0) == 0) {
            for (size_t k = 0; k < labels.size(); ++k) {
                const std::string& lab = labels[k];
                if (lab.back() != 'X') continue;
                std::string partner = lab;
                partner.back() = 'Y';
                const int q = find_label(partner);
                if (q >= 0) {
                    detail::pair_block(w, static_cast<int>(k), q);
                    ++pairs;
                }
            }
        } else {
            throw std::invalid_argument("projection_basis: family without an established projection basis");
        }
        if (pairs == 0) throw std::runtime_error("projection_basis: no projector pairs found");
        res.expected_rank = fam.bond_dim / 2;
    }

    res.rotation = w;
    res.induced = induced_operators(res.kraus, w);
    for (const Mat& a : res.induced) {
        const Classification c = classify_operator(a, fam.word_group);
        res.classes.push_back(c.cls);
        if (c.cls == StepClass::projection_hit) {
            if (c.rank != res.expected_rank)
                throw std::runtime_error("projection_basis: unexpected projector rank");
            ++res.hits;
        }
    }
    res.fraction = Fraction(res.hits, dim);
    return res;
}

// ---------------------------------------------------------------------------
// Byproduct propagation

struct PullthroughResult {
    ByproductWord word;
    Mat transformed_gate;
    int sign = 0;  // +1 commuting (gate unchanged), -1 anticommuting (angle negated), 0 other
    std::string classification;
};

// Moves a pending elementary gate V = exp(i angle G) past a byproduct word W:
// V W = W V' with V' = W^dag V W. Commuting words leave V alone; anticommuting
// words negate the angle; anything else returns the exact conjugated operator.
inline PullthroughResult byproduct_pullthrough(const ResourceFamily& fam, const ByproductWord& word,
                                               const Mat& generator, double angle) {
    const Mat w = byproduct_matrix(fam.word_group, word);
    PullthroughResult res;
    res.word = word;
    res.sign = detail::commute_sign(w, generator);
    if (res.sign > 0) {
        res.transformed_gate = exp_i_hermitian(generator, angle);
        res.classification = "commuting";
    } else if (res.sign < 0) {
        res.transformed_gate = exp_i_hermitian(generator, -angle);
        res.classification = "anticommuting";
    } else {
        const Mat v = exp_i_hermitian(generator, angle);
        res.transformed_gate = w.adjoint() * v * w;
        res.classification = "other";
    }
    return res;
}

// ---------------------------------------------------------------------------
// Symplectic commutation counting

struct SpCommutationTable {
    int n = 0;
    // per sector (X, Y, Z): for each element, counts of commuting partners in
    // {X_ij}, {Y_ij}, {Z_j} (self included)
    std::vector<std::array<int, 3>> x_rows, y_rows, z_rows;
    bool matches_formulas = false;
};

// Commutation counting over the unitarized sectors of su(n), n = 2^m <= 8:
//   X element: n^2/4 in {X}, n^2/4 - n/2 in {Y}, n/2 - 1 in {Z};
//   Y element: n^2/4 - n/2 in {X}, n^2/4 in {Y}, n/2 - 1 in {Z};
//   Z element: n^2/4 - n/2 in both {X} and {Y}.
inline SpCommutationTable sp_commutation_census(int n) {
    if (n != 2 && n != 4 && n != 8) throw std::invalid_argument("sp_commutation_census: n must be 2, 4 or 8");
    const auto sectors = sp_sector_bases(n);
    SpCommutationTable tab;
    tab.n = n;
    auto count_commuting = [&](const Mat& e, const OperatorBasis& sec) {
        int c = 0;
        for (const Mat& s : sec.elems)
            if (detail::commute_sign(e, s) > 0) ++c;
        return c;
    };
    auto fill = [&](const OperatorBasis& sec, std::vector<std::array<int, 3>>& rows) {
        for (const Mat& e : sec.elems)
            rows.push_back({count_commuting(e, sectors[0]), count_commuting(e, sectors[1]),
                            count_commuting(e, sectors[2])});
    };
    fill(sectors[0], tab.x_rows);
    fill(sectors[1], tab.y_rows);
    fill(sectors[2], tab.z_rows);
    const int q = n * n / 4;
    const int h = n / 2;
    tab.matches_formulas = true;
    for (const auto& r : tab.x_rows)
        if (r[0] != q || r[1] != q - h || r[2] != h - 1) tab.matches_formulas = false;
    for (const auto& r : tab.y_rows)
        if (r[0] != q - h || r[1] != q || r[2] != h - 1) tab.matches_formulas = false;
    for (const auto& r : tab.z_rows)
        if (r[0] != q - h || r[1] != q - h) tab.matches_formulas = false;
    return tab;
}

// ---------------------------------------------------------------------------
// Real-space versus correlation-space equivalence

struct RealVirtualReport {
    int branches = 0;
    double deviation = 0.0;
    bool pass = false;
};

// Compares, branch by branch, the physical picture (independent circuit
// construction, projective measurements on physical sites) against the
// correlation-space picture (net induced operator applied to the boundary).
// AKLT-type families use the dilation circuit; cluster families use the
// entangling-gate circuit on 2N physical sites with <R| = sqrt(d) <0|.
// Residuals must agree exactly, including norms.
inline RealVirtualReport real_vs_virtual_check(const MeasurementPlan& plan, int sites,
                                               const Vec& right_boundary,
                                               std::int64_t budget = kDefaultAmplitudeBudget,
                                               double eps = 1e-8) {
    const ResourceFamily& fam = plan.family;
    const int k = static_cast<int>(plan.steps.size());
    if (k > sites) throw std::invalid_argument("real_vs_virtual_check: more steps than sites");
    const Vec input = plan.input_or_default();
    const Vec bra_r = right_boundary / right_boundary.norm();

    Vec physical;
    const bool is_cluster = fam.tag.rfind("cluster(", 0) == 0;
    if (is_cluster) {
        const int d = fam.bond_dim;
        const auto comma = fam.tag.find(',');
        const int x = std::stoi(fam.tag.substr(comma + 1, fam.tag.size() - comma - 2));
        const ClusterSpec spec = ClusterSpec::symmetric(d, x, 2 * sites, Boundary::obc);
        // 2N sites of dimension d share the index layout of N sites of dimension d^2
        physical = cluster_wire(spec, input, budget).amps / std::sqrt(static_cast<double>(d));
    } else {
        const Vec circ = dilation_circuit_state(fam.kraus, sites, input, budget);
        physical = project_ancilla(circ, fam.phys_dim, sites, bra_r).amps;
    }

    const auto branches = run_plan_enumerate(plan);
    RealVirtualReport rep;
    rep.branches = static_cast<int>(branches.size());
    for (const BranchRecord& br : branches) {
        Vec resid = physical;
        for (int s = 0; s < k; ++s) {
            const Mat rot = effective_rotation(fam, plan.steps[s], br.signs[s]);
            const Vec outcome_ket = rot.adjoint().col(br.outcomes[s]);
            const std::int64_t block = resid.size() / fam.phys_dim;
            Vec next = Vec::Zero(block);
            for (int v = 0; v < fam.phys_dim; ++v)
                next += std::conj(outcome_ket(v)) * resid.segment(static_cast<std::int64_t>(v) * block, block);
            resid = std::move(next);
        }
        const Vec l_after = br.net * input;
        double dev = 0.0;
        if (k == sites) {
            dev = std::abs(resid(0) - bra_r.dot(l_after));
        } else {
            const QuditRegister want = mps_contract_raw(fam.kraus, sites - k, l_after, bra_r, budget);
            dev = (resid - want.amps).cwiseAbs().maxCoeff();
        }
        rep.deviation = std::max(rep.deviation, dev);
    }
    rep.pass = rep.deviation < eps;
    return rep;
}

// ---------------------------------------------------------------------------
// Universality at the algebra level

struct SpanCheckResult {
    int rank = 0;
    int expected = 0;
    bool pass = false;
};

namespace detail {

inline Eigen::VectorXd real_embedding(const Mat& h) {
    const Eigen::Index n = h.rows();
    Eigen::VectorXd v(2 * n * n);
    Eigen::Index p = 0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            v(p++) = h(r, c).real();
            v(p++) = h(r, c).imag();
        }
    return v;
}

inline int real_span_rank(const std::vector<Mat>& mats) {
    if (mats.empty()) return 0;
    Eigen::MatrixXd stack(real_embedding(mats[0]).size(), static_cast<Eigen::Index>(mats.size()));
    for (size_t k = 0; k < mats.size(); ++k) stack.col(static_cast<Eigen::Index>(k)) = real_embedding(mats[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stack);
    qr.setThreshold(1e-9);
    return static_cast<int>(qr.rank());
}

inline Mat traceless_part(const Mat& h) {
    const Eigen::Index n = h.rows();
    return h - (h.trace() / static_cast<double>(n)) * Mat::Identity(n, n);
}

}  // namespace detail

// Lie-algebra span of the family's elementary generators: closes the traceless
// Hermitian generators under i[.,.] and reports the real rank of the span.
// su(d) closes at d^2-1 (prime d); so and sp close at their own dimension.
inline SpanCheckResult universality_span_check(const ResourceFamily& fam) {
    std::vector<Mat> gens;
    int expected = 0;
    if (fam.tag.rfind("su(", 0) == 0) {
        const int d = fam.bond_dim;
        if (!is_prime(d)) throw std::invalid_argument("universality_span_check: prime dimension required for su");
        for (int op = 0; op <= d; ++op) {
            const auto projectors = word_eigenprojectors(mub_operator(d, op), d);
            for (const Mat& p : projectors) gens.push_back(detail::traceless_part(p));
        }
        expected = d * d - 1;
    } else {
        for (const Mat& g : fam.virtual_algebra) gens.push_back(detail::traceless_part(g));
        expected = static_cast<int>(fam.virtual_algebra.size());
    }
    int rank = detail::real_span_rank(gens);
    for (int round = 0; round < 4; ++round) {
        const size_t before = gens.size();
        std::vector<Mat> all = gens;
        for (size_t a = 0; a < before; ++a)
            for (size_t b = a + 1; b < before; ++b) {
                Mat comm = cx(0, 1) * (gens[a] * gens[b] - gens[b] * gens[a]);
                if (max_abs(comm) > 1e-9) all.push_back(std::move(comm));
            }
        const int new_rank = detail::real_span_rank(all);
        if (new_rank == rank) break;
        rank = new_rank;
        gens = std::move(all);
        if (gens.size() > 4096) break;
    }
    SpanCheckResult res;
    res.rank = rank;
    res.expected = expected;
    res.pass = rank == expected;
    return res;
}

}  // namespace mbqc

#endif  // MBQC_ENGINE_HPP

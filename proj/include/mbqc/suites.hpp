#ifndef MBQC_SUITES_HPP
#define MBQC_SUITES_HPP

#include "mbqc/engine.hpp"

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

// Named verification suites driving the module invariants, shared by the
// command-line front end and the acceptance tests. Every check carries the
// expected and observed values so reports are self-contained.

namespace mbqc {

struct ResourceSpec {
    std::string family = "spin1";  // cluster | su | so-fund | so-adj | sp | spin1
    int d = 2;                     // cluster qudit dimension
    int x = 1;                     // cluster gate order
    int sites = 4;
    Boundary bc = Boundary::obc;
    int n = 3;                     // su(N)
    int ell = 2;                   // so families
    int m = 1;                     // sp(2^m)

    std::string describe() const {
        std::ostringstream os;
        if (family == "cluster")
            os << "cluster d=" << d << " x=" << x << " N=" << sites
               << " bc=" << (bc == Boundary::pbc ? "pbc" : "obc");
        else if (family == "su")
            os << "su N=" << n;
        else if (family == "so-fund" || family == "so-adj")
            os << family << " l=" << ell;
        else if (family == "sp")
            os << "sp m=" << m;
        else
            os << family;
        return os.str();
    }
};

inline ResourceFamily resolve_family(const ResourceSpec& spec) {
    if (spec.family == "spin1") return spin1_family();
    if (spec.family == "su") return su_family(spec.n);
    if (spec.family == "so-fund") return so_fund_family(spec.ell);
    if (spec.family == "so-adj") return so_adj_family(spec.ell);
    if (spec.family == "sp") return sp_family(spec.m);
    if (spec.family == "cluster") return cluster_family(spec.d, spec.x);
    throw std::invalid_argument("unknown family: " + spec.family);
}

struct Check {
    std::string name;
    bool pass = false;
    double deviation = 0.0;
    std::string expected;
    std::string observed;
};

struct SuiteReport {
    std::string suite;
    std::string spec;
    std::vector<Check> checks;

    bool all_pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline std::int64_t amplitude_budget_from_env() {
    if (const char* env = std::getenv("MBQC_BUDGET")) {
        const long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return kDefaultAmplitudeBudget;
}

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline Check deviation_check(std::string name, double dev, double tol, std::string expected = "< tol") {
    Check c;
    c.name = std::move(name);
    c.deviation = dev;
    c.pass = dev < tol;
    c.expected = std::move(expected);
    c.observed = "deviation " + fmt_double(dev);
    return c;
}

inline Check fraction_check(std::string name, const Fraction& got, const Fraction& want) {
    Check c;
    c.name = std::move(name);
    c.pass = got == want;
    c.deviation = std::abs(got.value() - want.value());
    c.expected = std::to_string(want.num) + "/" + std::to_string(want.den);
    c.observed = std::to_string(got.num) + "/" + std::to_string(got.den);
    return c;
}

inline Check count_check(std::string name, long long got, long long want) {
    Check c;
    c.name = std::move(name);
    c.pass = got == want;
    c.deviation = static_cast<double>(std::abs(got - want));
    c.expected = std::to_string(want);
    c.observed = std::to_string(got);
    return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cluster suite

inline SuiteReport suite_cluster(int d, int x, int max_sites = 5, double tol = kEps,
                                 std::int64_t budget = kDefaultAmplitudeBudget) {
    SuiteReport rep;
    rep.suite = "cluster";
    {
        ResourceSpec s;
        s.family = "cluster";
        s.d = d;
        s.x = x;
        s.sites = max_sites;
        rep.spec = s.describe();
    }
    for (int sites = 2; sites <= max_sites; ++sites)
        for (auto bc : {Boundary::obc, Boundary::pbc}) {
            const ClusterSpec spec = ClusterSpec::symmetric(d, x, sites, bc);
            const QuditRegister state = build_cluster(spec, budget);
            const double dev = stabilizer_deviation(spec, state);
            rep.checks.push_back(detail::deviation_check(
                "stabilizers fix the state, N=" + std::to_string(sites) +
                    (bc == Boundary::pbc ? " pbc" : " obc"),
                dev, tol));
        }
    {
        const SptLabel lab = spt_label(d, x);
        const cx want = omega_root(d, x);
        Check c;
        c.name = "projective-pair commutator phase";
        c.deviation = std::abs(lab.cocycle_phase - want);
        c.pass = c.deviation < tol;
        c.expected = "exp(2 pi i x/d)";
        c.observed = detail::fmt_double(std::arg(lab.cocycle_phase)) + " rad";
        rep.checks.push_back(c);
        rep.checks.push_back(detail::count_check("bond dimension d/gcd(x,d)", lab.bond_dim, d / std::gcd(x, d)));
    }
    {
        // cocycle composition against the projective representation, all pairs
        double worst = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        const Mat lhs = projective_rep(d, x, i, j) * projective_rep(d, x, a, b);
                        const Mat rhs = cocycle(d, x, i, j, a, b) *
                                        projective_rep(d, x, mod_d(i + a, d), mod_d(j + b, d));
                        worst = std::max(worst, max_abs_diff(lhs, rhs));
                    }
        rep.checks.push_back(detail::deviation_check("cocycle composition, all index pairs", worst, tol));
    }
    if (std::gcd(x, d) == 1) {
        const TeleportReport tel = teleport_identities(d, x);
        rep.checks.push_back(detail::deviation_check(
            "teleportation projection relations (" + std::to_string(tel.cases) + " cases)", tel.deviation, tol));
    } else {
        const FactorizationResult fac = factorize_noncoprime(d, x, std::min(3, max_sites), Boundary::obc, tol, budget);
        rep.checks.push_back(detail::deviation_check("noncoprime bond factorization", fac.deviation, tol));
    }
    {
        // SPT transitions: alternating parity flip and the pair pattern
        const int sites = std::min(4, max_sites);
        const ClusterSpec src = ClusterSpec::symmetric(d, x, sites, Boundary::obc);
        const ClusterSpec swapped = ClusterSpec::general(d, d - x, x, sites, Boundary::obc);
        const ClusterSpec uniform = ClusterSpec::general(d, x, x, sites, Boundary::obc);
        rep.checks.push_back(detail::deviation_check(
            "parity pattern maps C(x,y) to C(y,x)",
            lu_transition(src, TransitionPattern::pi_alternating(1), swapped, tol, budget).deviation, tol));
        rep.checks.push_back(detail::deviation_check(
            "pair pattern maps C(x,d-x) to C(x,x)",
            lu_transition(src, TransitionPattern::pi_pairs(0), uniform, tol, budget).deviation, tol));
    }
    if (checked_power(d, std::min(4, max_sites), budget) > 0 && d <= 4) {
        const int sites = std::min(4, max_sites);
        const ClusterSpec spec = ClusterSpec::symmetric(d, x, sites, Boundary::pbc);
        const Mat h = parent_hamiltonian(spec, budget);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const QuditRegister state = build_cluster(spec, budget);
        const Vec hv = h * state.amps;
        const double e0 = es.eigenvalues()(0);
        rep.checks.push_back(detail::deviation_check("pbc state is a minimal-energy eigenstate",
                                                     (hv - e0 * state.amps).cwiseAbs().maxCoeff(), 1e-7));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// AKLT suite

inline Fraction expected_success_fraction(const ResourceFamily& fam) {
    const std::string& t = fam.tag;
    if (t == "spin1") return {2, 3};
    if (t.rfind("su(", 0) == 0) {
        const int n = fam.bond_dim;
        return {n, n + 1};
    }
    if (t.rfind("so-fund(", 0) == 0) {
        const int ell = static_cast<int>((fam.phys_dim - 1) / 2);
        return {2, 2 * ell + 1};
    }
    if (t.rfind("so-adj(", 0) == 0) {
        const int ell = static_cast<int>((std::sqrt(1.0 + 8.0 * fam.phys_dim) - 1.0) / 4.0 + 0.5);
        return {2 * (2 * ell - 1), ell * (2 * ell + 1)};
    }
    if (t.rfind("sp(", 0) == 0) {
        const int n = fam.bond_dim / 2;
        return {n + 1, 2 * n + 1};
    }
    throw std::invalid_argument("expected_success_fraction: no closed form for " + fam.tag);
}

inline SuiteReport suite_aklt(const ResourceFamily& fam, int symmetry_samples = 50, std::uint64_t seed = 23) {
    SuiteReport rep;
    rep.suite = "aklt";
    rep.spec = fam.tag;
    rep.checks.push_back(detail::deviation_check("trace-preserving channel",
                                                 validate_channel(fam.kraus).deviation, kEps));
    rep.checks.push_back(detail::count_check("on-site dimension", fam.phys_dim,
                                             static_cast<long long>(fam.kraus.ops.size())));
    {
        double worst = 0.0;
        for (const Mat& a : fam.kraus.ops) {
            const Mat u = a / fam.kraus.weight;
            worst = std::max(worst, max_abs_diff(u.adjoint() * u, Mat::Identity(fam.bond_dim, fam.bond_dim)));
        }
        rep.checks.push_back(detail::deviation_check("every Kraus operator is weight x unitary", worst, kEps));
    }
    {
        const FamilySymmetryReport sym = verify_family_symmetry(fam, symmetry_samples, seed);
        rep.checks.push_back(detail::deviation_check(
            "symmetry condition over " + std::to_string(symmetry_samples) + " group samples",
            sym.max_deviation, 1e-7));
    }
    {
        // closure of the word group (byproduct normal form exists)
        bool ok = true;
        try {
            byproduct_closure_table(fam.word_group);
        } catch (const std::exception&) {
            ok = false;
        }
        Check c;
        c.name = "byproduct word closure";
        c.pass = ok;
        c.expected = "every product is phase x word";
        c.observed = ok ? "closed" : "not closed";
        rep.checks.push_back(c);
    }
    if (fam.tag.rfind("sp(", 0) == 0) {
        const int n = fam.bond_dim / 2;
        const Mat delta = symplectic_form(n);
        const Mat shuffle = sp_block_permutation(n);
        double worst = 0.0;
        Rng rng(seed);
        for (const Mat& g : fam.virtual_algebra) {
            const Mat gb = shuffle * g * shuffle.transpose();
            const Mat u = exp_i_hermitian(gb, -rng.uniform(-2.0, 2.0));
            worst = std::max(worst, max_abs_diff(u.transpose() * delta * u, delta));
        }
        rep.checks.push_back(detail::deviation_check("generators preserve the symplectic form", worst, 1e-9));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Engine suite

inline SuiteReport suite_engine(const ResourceFamily& fam, std::uint64_t seed = 29,
                                std::int64_t budget = kDefaultAmplitudeBudget) {
    SuiteReport rep;
    rep.suite = "engine";
    rep.spec = fam.tag;
    const bool is_cluster = fam.tag.rfind("cluster(", 0) == 0;
    if (!is_cluster) {
        rep.checks.push_back(detail::fraction_check("gate success census", success_census_all(fam),
                                                    expected_success_fraction(fam)));
        rep.checks.push_back(detail::fraction_check("projection census", projection_basis(fam).fraction,
                                                    expected_success_fraction(fam)));
        const SpanCheckResult span = universality_span_check(fam);
        rep.checks.push_back(detail::count_check("generator span rank", span.rank, span.expected));
    }
    {
        // branch probabilities sum to one on a short wire plan
        MeasurementPlan plan;
        plan.family = fam;
        plan.steps = {wire_step(fam), wire_step(fam)};
        Rng rng(seed);
        plan.input = rng.random_state(fam.bond_dim);
        const auto branches = run_plan_enumerate(plan);
        double total = 0.0;
        for (const BranchRecord& br : branches) total += br.probability;
        rep.checks.push_back(detail::deviation_check("branch probabilities sum to 1", std::abs(total - 1.0), kEps));
    }
    {
        // real space vs correlation space on a small chain
        MeasurementPlan plan;
        plan.family = fam;
        Rng rng(seed + 1);
        plan.input = rng.random_state(fam.bond_dim);
        int sites = 2;
        if (is_cluster) {
            const Mat f = fourier_k(fam.bond_dim, 1);
            plan.steps = {rotation_step(kron(f, f), StepIntent::wire, "fourier block")};
        } else {
            plan.steps = {wire_step(fam)};
            sites = fam.phys_dim <= 10 ? 3 : 2;
            plan.steps.resize(sites - 1, wire_step(fam));
        }
        const Vec right = is_cluster ? Vec(Vec::Unit(fam.bond_dim, 0))
                                     : Vec(Vec::Constant(fam.bond_dim, 1.0 / std::sqrt(double(fam.bond_dim))));
        const RealVirtualReport rv = real_vs_virtual_check(plan, sites, right, budget);
        rep.checks.push_back(detail::deviation_check(
            "real vs virtual agreement (" + std::to_string(rv.branches) + " branches)", rv.deviation, 1e-8));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Summary table over all families

struct FamilyTableRow {
    std::string family;
    int on_site_dim = 0;
    int virtual_dim = 0;
    std::string byproduct;
    Fraction census;
    Fraction closed_form;
    bool match = false;
};

inline std::vector<FamilyTableRow> family_property_table() {
    std::vector<FamilyTableRow> rows;
    auto add = [&](const ResourceFamily& fam, std::string byproduct) {
        FamilyTableRow row;
        row.family = fam.tag;
        row.on_site_dim = fam.phys_dim;
        row.virtual_dim = fam.bond_dim;
        row.byproduct = std::move(byproduct);
        row.census = success_census_all(fam);
        row.closed_form = expected_success_fraction(fam);
        row.match = row.census == row.closed_form;
        rows.push_back(std::move(row));
    };
    for (int n = 2; n <= 5; ++n) add(su_family(n), "shift/clock words");
    for (int ell = 1; ell <= 3; ++ell) add(so_fund_family(ell), "Pauli words");
    for (int ell = 1; ell <= 3; ++ell) add(so_adj_family(ell), "Pauli words");
    for (int m = 1; m <= 2; ++m) add(sp_family(m), "Pauli words");
    return rows;
}

inline SuiteReport suite_table(const std::vector<FamilyTableRow>& rows) {
    SuiteReport rep;
    rep.suite = "table";
    rep.spec = "all families";
    for (const FamilyTableRow& row : rows)
        rep.checks.push_back(detail::fraction_check(row.family + " success probability", row.census,
                                                    row.closed_form));
    return rep;
}

inline std::vector<SuiteReport> suite_all(std::int64_t budget = kDefaultAmplitudeBudget) {
    std::vector<SuiteReport> reports;
    for (int d : {2, 3})
        for (int x = 1; x < d; ++x) reports.push_back(suite_cluster(d, x, 4, kEps, budget));
    reports.push_back(suite_cluster(4, 2, 3, kEps, budget));
    for (const char* fam : {"spin1", "su", "so-fund", "so-adj", "sp"}) {
        ResourceSpec spec;
        spec.family = fam;
        spec.n = 3;
        spec.ell = 2;
        spec.m = 1;
        const ResourceFamily f = resolve_family(spec);
        reports.push_back(suite_aklt(f, 25));
        reports.push_back(suite_engine(f, 29, budget));
    }
    reports.push_back(suite_table(family_property_table()));
    return reports;
}

}  // namespace mbqc

#endif  // MBQC_SUITES_HPP

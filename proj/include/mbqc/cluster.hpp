#ifndef MBQC_CLUSTER_HPP
#define MBQC_CLUSTER_HPP

#include "mbqc/linalg.hpp"
#include "mbqc/mps.hpp"
#include "mbqc/operator_algebra.hpp"
#include "mbqc/states.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Qudit cluster states C_d(x,y): every site starts in |+_d> and the diagonal
// entangling gate S^x = sum_l P_l (x) Z^(xl) is applied on odd bonds, S^y on
// even bonds (bond 1 joins sites 1-2 and carries S^x). For the Z_d x Z_d
// symmetric family y = d - x; the builder accepts arbitrary (x, y) since
// local-unitary transitions also target states such as C_d(x, x).

namespace mbqc {

enum class Boundary { obc, pbc };

struct ClusterSpec {
    int d = 2;
    int x = 1;
    int y = 1;
    int sites = 2;
    Boundary bc = Boundary::obc;

    static ClusterSpec symmetric(int d, int x, int sites, Boundary bc) {
        check_qudit_dim(d);
        if (x < 1 || x > d - 1) throw std::invalid_argument("ClusterSpec: x out of range");
        if (sites < 2) throw std::invalid_argument("ClusterSpec: need at least two sites");
        return ClusterSpec{d, x, d - x, sites, bc};
    }

    static ClusterSpec general(int d, int x, int y, int sites, Boundary bc) {
        check_qudit_dim(d);
        if (sites < 2) throw std::invalid_argument("ClusterSpec: need at least two sites");
        return ClusterSpec{d, mod_d(x, d), mod_d(y, d), sites, bc};
    }

    int bond_count() const { return bc == Boundary::pbc ? sites : sites - 1; }

    // Bond b joins sites (b, b+1) (site count wraps for PBC); odd bonds carry S^x.
    int bond_order(int bond) const { return bond % 2 == 1 ? x : y; }
};

// Generalized controlled-Z gate S^x = sum_l P_l (x) Z^(xl) as a dense d^2 matrix.
inline Mat controlled_phase(int d, int x) {
    check_qudit_dim(d);
    if (x < 1 || x > d - 1) throw std::invalid_argument("controlled_phase: x out of range");
    Mat s = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Eigen::Index idx = static_cast<Eigen::Index>(i) * d + j;
            s(idx, idx) = omega_root(d, static_cast<long long>(x) * i * j);
        }
    return s;
}

// Entangled chain with an arbitrary state on site 1 and |+_d> elsewhere (OBC).
inline QuditRegister cluster_wire(const ClusterSpec& spec, const Vec& input,
                                  std::int64_t budget = kDefaultAmplitudeBudget) {
    if (input.size() != spec.d) throw std::invalid_argument("cluster_wire: input dimension mismatch");
    checked_power(spec.d, spec.sites, budget);
    QuditRegister reg = QuditRegister::uniform(spec.d, spec.sites);
    const std::int64_t block = reg.dim() / spec.d;
    const double rest = 1.0 / std::sqrt(static_cast<double>(block));
    for (int v = 0; v < spec.d; ++v)
        reg.amps.segment(static_cast<std::int64_t>(v) * block, block).setConstant(input(v) * rest);
    for (int b = 1; b <= spec.sites - 1; ++b)
        apply_controlled_phase(reg, b, b + 1, spec.bond_order(b));
    reg.normalize();
    return reg;
}

inline QuditRegister build_cluster(const ClusterSpec& spec, std::int64_t budget = kDefaultAmplitudeBudget) {
    checked_power(spec.d, spec.sites, budget);
    QuditRegister reg = QuditRegister::uniform(spec.d, spec.sites);
    for (int b = 1; b <= spec.bond_count(); ++b)
        apply_controlled_phase(reg, b, b % spec.sites + 1, spec.bond_order(b));
    return reg;
}

// One factor of a site-labeled operator word.
struct SiteOp {
    int site = 1;
    Mat op;
    std::string label;
};

using OperatorWord = std::vector<SiteOp>;

inline void apply_word(QuditRegister& reg, const OperatorWord& word) {
    for (const SiteOp& f : word) apply_site_op(reg, f.site, f.op);
}

// Stabilizer generator centered on `site`: X there, Z^(d - order) on each
// neighbor across its bonds. For the symmetric family this reads Z^x X Z^y on
// odd sites and Z^y X Z^x on even sites; OBC boundary words are truncated.
inline OperatorWord stabilizer_word(const ClusterSpec& spec, int site) {
    if (site < 1 || site > spec.sites) throw std::invalid_argument("stabilizer_word: site out of range");
    OperatorWord word;
    const int left_bond = site - 1;
    const int right_bond = site;
    if (site > 1 || spec.bc == Boundary::pbc) {
        const int bond = site > 1 ? left_bond : spec.sites;
        const int e = mod_d(spec.d - spec.bond_order(bond), spec.d);
        const int neighbor = site > 1 ? site - 1 : spec.sites;
        if (e != 0) word.push_back({neighbor, weyl_z(spec.d, e), "Z" + std::to_string(e)});
    }
    word.push_back({site, weyl_x(spec.d), "X"});
    if (site < spec.sites || spec.bc == Boundary::pbc) {
        const int e = mod_d(spec.d - spec.bond_order(right_bond), spec.d);
        const int neighbor = site < spec.sites ? site + 1 : 1;
        if (e != 0) word.push_back({neighbor, weyl_z(spec.d, e), "Z" + std::to_string(e)});
    }
    return word;
}

inline std::vector<OperatorWord> stabilizer_generators(const ClusterSpec& spec) {
    std::vector<OperatorWord> words;
    for (int site = 1; site <= spec.sites; ++site) words.push_back(stabilizer_word(spec, site));
    return words;
}

// Max-norm deviation of K|C> from |C| over all generators (eigenvalue-1 check).
inline double stabilizer_deviation(const ClusterSpec& spec, const QuditRegister& state) {
    double dev = 0.0;
    for (const OperatorWord& word : stabilizer_generators(spec)) {
        QuditRegister moved = state;
        apply_word(moved, word);
        dev = std::max(dev, (moved.amps - state.amps).cwiseAbs().maxCoeff());
    }
    return dev;
}

// H = -sum (K + K^dag) over stabilizer generators; OBC drops the boundary words.
inline Mat parent_hamiltonian(const ClusterSpec& spec, std::int64_t budget = kDefaultAmplitudeBudget) {
    const std::int64_t dim = checked_power(spec.d, spec.sites, budget);
    const int first = spec.bc == Boundary::pbc ? 1 : 2;
    const int last = spec.bc == Boundary::pbc ? spec.sites : spec.sites - 1;
    Mat h = Mat::Zero(dim, dim);
    QuditRegister basis_vec(spec.d, spec.sites);
    for (int site = first; site <= last; ++site) {
        const OperatorWord word = stabilizer_word(spec, site);
        for (std::int64_t col = 0; col < dim; ++col) {
            basis_vec.amps.setZero();
            basis_vec.amps(col) = 1.0;
            apply_word(basis_vec, word);
            h.col(col) -= basis_vec.amps;
        }
    }
    h = (h + Mat(h.adjoint())).eval();
    return h;
}

struct SptLabel {
    int d = 0;
    int x = 0;
    int bond_dim = 0;
    Mat vg;           // projective representation of the first Z_d generator
    Mat vh;           // and of the second
    cx cocycle_phase; // vg vh = phase * vh vg
    bool mnc = false; // maximally noncommutative class (gcd(x,d) = 1)
};

// SPT label of C_d(x, d-x): bond dimension b = d/gcd(x,d), projective pair
// (X_b, Z_b^a) with a = x/gcd(x,d), commutator phase e^(2 pi i x / d).
inline SptLabel spt_label(int d, int x) {
    check_qudit_dim(d);
    if (x < 1 || x > d - 1) throw std::invalid_argument("spt_label: x out of range");
    const int g = std::gcd(x, d);
    SptLabel lab;
    lab.d = d;
    lab.x = x;
    lab.bond_dim = d / g;
    const int a = x / g;
    lab.vg = weyl_x(lab.bond_dim);
    lab.vh = lab.bond_dim == 1 ? Mat::Identity(1, 1) : weyl_z(lab.bond_dim, a);
    lab.mnc = (g == 1);
    const Mat comm = lab.vg * lab.vh * lab.vg.adjoint() * lab.vh.adjoint();
    lab.cocycle_phase = comm(0, 0);
    if (max_abs_diff(comm, lab.cocycle_phase * Mat::Identity(lab.bond_dim, lab.bond_dim)) > kEps)
        throw std::runtime_error("spt_label: projective pair has non-scalar commutator");
    return lab;
}

// 2-cocycle of the projective representation v_x(i,j) = X^i Z^(xj):
// v_x(i,j) v_x(a,b) = omega^(-xaj) v_x(i+a, j+b).
inline cx cocycle(int d, int x, int i, int j, int a, int b) {
    check_qudit_dim(d);
    (void)i;
    (void)b;
    return omega_root(d, -static_cast<long long>(x) * a * j);
}

inline Mat projective_rep(int d, int x, int i, int j) {
    return weyl(d, i, mod_d(static_cast<long long>(x) * j, d));
}

// Site patterns of local-unitary SPT transitions.
struct TransitionPattern {
    enum class Kind { pi_alternating, pi_pairs, f_ax_alternating, identity };
    Kind kind = Kind::identity;
    int offset = 0;  // first site (1-based) carrying a nontrivial operator
    int a = 1;       // F_{ax} = F_a F_x parameters (f_ax_alternating only)
    int x = 1;

    static TransitionPattern pi_alternating(int offset) { return {Kind::pi_alternating, offset, 1, 1}; }
    static TransitionPattern pi_pairs(int offset) { return {Kind::pi_pairs, offset, 1, 1}; }
    static TransitionPattern f_ax(int a, int x, int offset) { return {Kind::f_ax_alternating, offset, a, x}; }
    static TransitionPattern identity() { return {}; }
};

struct TransitionResult {
    QuditRegister state;
    double deviation = 0.0;
    bool pass = false;
};

// Applies the pattern to the built source state and compares with the directly
// built target, up to a global phase.
inline TransitionResult lu_transition(const ClusterSpec& source, const TransitionPattern& pattern,
                                      const ClusterSpec& target, double eps = kEps,
                                      std::int64_t budget = kDefaultAmplitudeBudget) {
    if (source.d != target.d || source.sites != target.sites || source.bc != target.bc)
        throw std::invalid_argument("lu_transition: pattern/params inconsistent");
    QuditRegister state = build_cluster(source, budget);
    std::optional<Mat> site_op;
    switch (pattern.kind) {
        case TransitionPattern::Kind::identity: break;
        case TransitionPattern::Kind::pi_alternating:
        case TransitionPattern::Kind::pi_pairs: site_op = permutation_pi(source.d); break;
        case TransitionPattern::Kind::f_ax_alternating:
            site_op = fourier_k(source.d, pattern.a) * fourier_k(source.d, pattern.x);
            break;
    }
    if (site_op) {
        for (int site = 1; site <= source.sites; ++site) {
            bool hit;
            if (pattern.kind == TransitionPattern::Kind::pi_pairs)
                hit = ((site - 1 + pattern.offset) % 4 + 4) % 4 >= 2;  // offset = phase 0..3
            else
                hit = site % 2 == pattern.offset % 2;  // offset = first site hit (1 or 2)
            if (hit) apply_site_op(state, site, *site_op);
        }
    }
    TransitionResult res;
    const QuditRegister want = build_cluster(target, budget);
    res.deviation = phase_fit_vec(want.amps, state.amps).second;
    res.pass = res.deviation < eps;
    res.state = std::move(state);
    return res;
}

struct FactorizationResult {
    double deviation = 0.0;
    bool pass = false;
    int s = 0;  // gcd(x, d)
    int b = 0;  // d / s
    int a = 0;  // x / s
};

// C_{sb}(sa, sb-sa) = C_b(a, b-a) (x) |+_s>^N under the local isomorphism
// |l_d> = |q_s>|r_b> with l = q*b + r. Exact (no global phase involved).
inline FactorizationResult factorize_noncoprime(int d, int x, int sites, Boundary bc = Boundary::obc,
                                                double eps = kEps,
                                                std::int64_t budget = kDefaultAmplitudeBudget) {
    check_qudit_dim(d);
    const int s = std::gcd(x, d);
    if (s <= 1) throw std::invalid_argument("factorize_noncoprime: nothing-to-factor (gcd = 1)");
    const int b = d / s;
    const int a = x / s;
    const ClusterSpec big = ClusterSpec::symmetric(d, x, sites, bc);
    const QuditRegister big_state = build_cluster(big, budget);
    const QuditRegister small_state = build_cluster(ClusterSpec::symmetric(b, a, sites, bc), budget);
    FactorizationResult res;
    res.s = s;
    res.b = b;
    res.a = a;
    const double plus_amp = std::pow(1.0 / std::sqrt(static_cast<double>(s)), sites);
    double dev = 0.0;
    const std::int64_t dim = big_state.dim();
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        std::int64_t small_idx = 0;
        for (int site = 1; site <= sites; ++site) {
            const int l = big_state.digit(idx, site);
            small_idx = small_idx * b + l % b;  // r digit; the q digit is uniform
        }
        const cx want = small_state.amps(small_idx) * plus_amp;
        dev = std::max(dev, std::abs(big_state.amps(idx) - want));
    }
    res.deviation = dev;
    res.pass = dev < eps;
    return res;
}

struct TeleportReport {
    double deviation = 0.0;
    bool pass = false;
    int cases = 0;
};

// Projection relations on the three-qudit block  (1 (x) S^y)(S^x (x) 1) |psi>|+>|+>:
//   <s|<t| (X^i (x) X^j (x) 1) |Psi> = F_y P_{t+j} F_x P_{s+i} |psi>   (all s,t,i,j)
//   <s|<t| (F_al (x) F_be (x) 1) |Psi> = (1/d) F_y Z^(be t) F_x Z^(al s) |psi>
// checked as exact vector identities for a random input state. The projector
// shift follows the word convention <s| X^i = <s+i|; running over all i,j it
// covers the same identity family as the s-i form.
inline TeleportReport teleport_identities(int d, int x, std::uint64_t seed = 7, double eps = kEps) {
    check_qudit_dim(d);
    if (x < 1 || x > d - 1) throw std::invalid_argument("teleport_identities: x out of range");
    const int y = d - x;
    if (std::gcd(x, d) != 1)
        throw std::invalid_argument("teleport_identities: x (and y = d-x) must be coprime with d");
    Rng rng(seed);
    const Vec psi = rng.random_state(d);
    const ClusterSpec spec = ClusterSpec::general(d, x, y, 3, Boundary::obc);
    const QuditRegister block = cluster_wire(spec, psi);

    TeleportReport rep;
    const Mat f_x = fourier_k(d, x);
    const Mat f_y = fourier_k(d, y);

    auto project_two = [&](const QuditRegister& st, const Vec& bra1, const Vec& bra2) -> Vec {
        QuditRegister after1 = project_first_site(st, bra1);
        QuditRegister after2 = project_first_site(after1, bra2);
        return after2.amps;
    };

    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            QuditRegister shifted = block;
            if (i) apply_site_op(shifted, 1, weyl_x(d, i));
            if (j) apply_site_op(shifted, 2, weyl_x(d, j));
            for (int s = 0; s < d; ++s)
                for (int t = 0; t < d; ++t) {
                    Vec e_s = Vec::Zero(d), e_t = Vec::Zero(d);
                    e_s(s) = 1.0;
                    e_t(t) = 1.0;
                    const Vec lhs = project_two(shifted, e_s, e_t);
                    const cx c1 = psi(mod_d(s + i, d));
                    Vec rhs = c1 * f_x.col(mod_d(s + i, d));  // F_x P_{s+i} |psi>
                    const cx c2 = rhs(mod_d(t + j, d));
                    rhs = c2 * f_y.col(mod_d(t + j, d));  // then F_y P_{t+j}
                    rep.deviation = std::max(rep.deviation, (lhs - rhs).cwiseAbs().maxCoeff());
                    ++rep.cases;
                }
        }
    // Fourier-rotated version
    for (int al = 1; al < d; ++al) {
        if (std::gcd(al, d) != 1) continue;
        for (int be = 1; be < d; ++be) {
            if (std::gcd(be, d) != 1) continue;
            const Mat f_al = fourier_k(d, al);
            const Mat f_be = fourier_k(d, be);
            for (int s = 0; s < d; ++s)
                for (int t = 0; t < d; ++t) {
                    // <s| F = row s of F; the projected bra-vector is conj(F^T e_s) = conj(F) e_s... use F^dag columns
                    const Vec w_s = f_al.adjoint().col(s);  // |w> with <w| = <s|F_al
                    const Vec w_t = f_be.adjoint().col(t);
                    const Vec lhs = project_two(block, w_s, w_t);
                    Vec rhs = weyl_z(d, mod_d(static_cast<long long>(al) * s, d)) * psi;
                    rhs = f_x * rhs;
                    rhs = weyl_z(d, mod_d(static_cast<long long>(be) * t, d)) * rhs;
                    rhs = f_y * rhs;
                    rhs /= static_cast<double>(d);
                    rep.deviation = std::max(rep.deviation, (lhs - rhs).cwiseAbs().maxCoeff());
                    ++rep.cases;
                }
        }
    }
    rep.pass = rep.deviation < eps;
    return rep;
}

// Translation-invariant Kraus form of the symmetric cluster family after
// blocking two sites: A_(s,t) = F_y P_t F_x P_s, physical index s*d + t.
inline KrausSet cluster_blocked_kraus(int d, int x) {
    check_qudit_dim(d);
    const int y = d - x;
    if (std::gcd(x, d) != 1) throw std::invalid_argument("cluster_blocked_kraus: bond dimension would factor; use gcd(x,d) = 1");
    const Mat f_x = fourier_k(d, x);
    const Mat f_y = fourier_k(d, y);
    KrausSet k;
    k.phys_dim = d * d;
    k.bond_dim = d;
    k.weight = 1.0 / std::sqrt(static_cast<double>(d * d));
    for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) {
            Mat p_s = Mat::Zero(d, d);
            p_s(s, s) = 1.0;
            Mat p_t = Mat::Zero(d, d);
            p_t(t, t) = 1.0;
            k.ops.push_back(f_y * p_t * f_x * p_s);
        }
    return k;
}

}  // namespace mbqc

#endif  // MBQC_CLUSTER_HPP

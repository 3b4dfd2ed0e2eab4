#ifndef MBQC_MPS_HPP
#define MBQC_MPS_HPP

#include "mbqc/linalg.hpp"
#include "mbqc/states.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

// Translation-invariant matrix product states viewed as quantum channels:
// a site tensor is a Kraus set {A_i} with sum_i A_i^dag A_i = 1 acting on the
// bond (correlation) space. States are assembled so that site 1 carries the
// left boundary |L> and is consumed first:
//   amp(i_1 .. i_N) = <R| A_{i_N} ... A_{i_1} |L>,
// which matches the sequential dilation circuit with U_1 applied first.

namespace mbqc {

inline constexpr std::int64_t kDefaultAmplitudeBudget = 20'000'000;

struct KrausSet {
    int phys_dim = 0;
    int bond_dim = 0;
    double weight = 0.0;  // uniform outcome weight; 1/sqrt(#ops) for unitary-word sets
    std::vector<Mat> ops;
};

struct BoundaryPair {
    Vec left;   // |L>, attached at site 1
    Vec right;  // |R>; the contraction uses <R|

    static BoundaryPair defaults(int bond_dim) {
        BoundaryPair b;
        b.left = Vec::Zero(bond_dim);
        b.left(0) = 1.0;
        b.right = Vec::Constant(bond_dim, 1.0 / std::sqrt(static_cast<double>(bond_dim)));
        return b;
    }
};

struct ChannelReport {
    double deviation = 0.0;
    bool pass = false;
};

// Max-norm deviation of sum_i A_i^dag A_i from the identity.
inline ChannelReport validate_channel(const KrausSet& k, double eps = kEps) {
    if (k.ops.empty()) throw std::invalid_argument("validate_channel: empty Kraus set");
    Mat acc = Mat::Zero(k.bond_dim, k.bond_dim);
    for (const Mat& a : k.ops) acc += a.adjoint() * a;
    ChannelReport rep;
    rep.deviation = max_abs_diff(acc, Mat::Identity(k.bond_dim, k.bond_dim));
    rep.pass = rep.deviation < eps;
    return rep;
}

// Stinespring dilation: unitary U on (phys x bond) with U(|0> (x) |v>) = sum_i |i> (x) A_i|v>.
// Tensor index convention: |i> (x) |v| -> i*bond_dim + v. Undefined columns are
// completed deterministically from canonical basis vectors.
inline Mat dilation_unitary(const KrausSet& k, double eps = kEps) {
    const auto chan = validate_channel(k, eps);
    if (!chan.pass) throw std::invalid_argument("dilation_unitary: channel-invalid Kraus set");
    const int d = k.phys_dim;
    const int chi = k.bond_dim;
    Mat iso(d * chi, chi);
    for (int v = 0; v < chi; ++v)
        for (int i = 0; i < d; ++i) iso.block(static_cast<Eigen::Index>(i) * chi, v, chi, 1) = k.ops[i].col(v);
    // Place the defined block at input states |0> (x) |v>, i.e. the first chi columns.
    Mat u = complete_isometry(iso);
    if (!is_unitary(u, 1e-8)) throw std::runtime_error("dilation_unitary: completion not unitary");
    return u;
}

// Raw contraction amp(i_1..i_N) = <R| A_{i_N} ... A_{i_1} |L> with the boundary
// vectors used exactly as given (no normalization anywhere).
inline QuditRegister mps_contract_raw(const KrausSet& k, int sites, const Vec& left, const Vec& right,
                                      std::int64_t budget = kDefaultAmplitudeBudget) {
    if (sites < 1) throw std::invalid_argument("mps_contract_raw: need at least one site");
    if (left.size() != k.bond_dim || right.size() != k.bond_dim)
        throw std::invalid_argument("mps_contract_raw: boundary dimension mismatch");
    checked_power(k.phys_dim, sites, budget);

    QuditRegister reg(k.phys_dim, sites);
    // Depth-first over site indices; site 1 is the most significant digit and its
    // Kraus operator is applied first.
    std::vector<Vec> stack(static_cast<size_t>(sites) + 1, Vec(k.bond_dim));
    stack[0] = left;
    std::int64_t idx = 0;
    auto rec = [&](auto&& self, int level) -> void {
        if (level == sites) {
            reg.amps(idx) = right.dot(stack[sites]);
            return;
        }
        for (int i = 0; i < k.phys_dim; ++i) {
            stack[level + 1].noalias() = k.ops[i] * stack[level];
            idx = idx * k.phys_dim + i;
            self(self, level + 1);
            idx /= k.phys_dim;
        }
    };
    rec(rec, 0);
    return reg;
}

// amp(i_1..i_N) = <R| A_{i_N} ... A_{i_1} |L>, normalized. Guarded by the
// amplitude budget (phys_dim^N entries).
inline QuditRegister assemble_state(const KrausSet& k, int sites, const BoundaryPair& b,
                                    std::int64_t budget = kDefaultAmplitudeBudget) {
    if (b.left.norm() == 0.0 || b.right.norm() == 0.0)
        throw std::invalid_argument("assemble_state: boundary vectors must be nonzero");
    QuditRegister reg = mps_contract_raw(k, sites, b.left / b.left.norm(), b.right / b.right.norm(), budget);
    reg.normalize();
    return reg;
}

// Full dilation-circuit state on N sites plus the ancilla (ancilla index fastest):
// apply U_1 .. U_N to |0..0> (x) |L/norm>. Used as the independent oracle for
// assemble_state and for real-space measurement checks.
inline Vec dilation_circuit_state(const KrausSet& k, int sites, const Vec& left,
                                  std::int64_t budget = kDefaultAmplitudeBudget) {
    const int d = k.phys_dim;
    const int chi = k.bond_dim;
    const std::int64_t phys = checked_power(d, sites, budget / chi);
    const Mat u = dilation_unitary(k);
    Vec state = Vec::Zero(phys * chi);
    state.segment(0, chi) = left / left.norm();  // sites all |0>, ancilla block first
    std::vector<cx> gathered(static_cast<size_t>(d) * chi);
    for (int site = 1; site <= sites; ++site) {
        std::int64_t site_stride = chi;
        for (int s = site + 1; s <= sites; ++s) site_stride *= d;
        const std::int64_t dim = phys * chi;
        for (std::int64_t base = 0; base < dim; ++base) {
            if (base / site_stride % d != 0 || base / 1 % chi != 0) continue;
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < chi; ++c) gathered[static_cast<size_t>(r) * chi + c] = state(base + r * site_stride + c);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < chi; ++c) {
                    cx acc = 0.0;
                    for (size_t in = 0; in < gathered.size(); ++in)
                        acc += u(static_cast<Eigen::Index>(r) * chi + c, static_cast<Eigen::Index>(in)) * gathered[in];
                    state(base + r * site_stride + c) = acc;
                }
        }
    }
    return state;
}

// Contracts the ancilla of a dilation-circuit state against <R|.
inline QuditRegister project_ancilla(const Vec& circuit_state, int d, int sites, const Vec& right) {
    const int chi = static_cast<int>(right.size());
    QuditRegister reg(d, sites);
    const std::int64_t phys = reg.dim();
    if (circuit_state.size() != phys * chi) throw std::invalid_argument("project_ancilla: size mismatch");
    const Vec bra = right / right.norm();
    for (std::int64_t p = 0; p < phys; ++p) {
        cx acc = 0.0;
        for (int c = 0; c < chi; ++c) acc += std::conj(bra(c)) * circuit_state(p * chi + c);
        reg.amps(p) = acc;
    }
    return reg;
}

struct SymmetryReport {
    double phase = 0.0;      // fitted global phase phi
    double deviation = 0.0;  // max-norm over all i of  sum_j u_ij A_j - e^{i phi} V^dag A_i V
    bool pass = false;
};

// Checks the symmetry condition sum_j u_ij A_j = e^{i phi} V^dag A_i V with one
// global phase fitted from the largest-magnitude entry.
inline SymmetryReport check_symmetry_condition(const KrausSet& k, const Mat& u_phys, const Mat& v_bond,
                                               double eps = 1e-7) {
    if (u_phys.rows() != k.phys_dim) throw std::invalid_argument("check_symmetry_condition: dimension-mismatch (Ug)");
    if (v_bond.rows() != k.bond_dim) throw std::invalid_argument("check_symmetry_condition: dimension-mismatch (Vg)");
    if (!is_unitary(u_phys, 1e-7) || !is_unitary(v_bond, 1e-7))
        throw std::invalid_argument("check_symmetry_condition: operators must be unitary");
    std::vector<Mat> lhs(k.phys_dim), rhs(k.phys_dim);
    for (int i = 0; i < k.phys_dim; ++i) {
        Mat acc = Mat::Zero(k.bond_dim, k.bond_dim);
        for (int j = 0; j < k.phys_dim; ++j) acc += u_phys(i, j) * k.ops[j];
        lhs[i] = std::move(acc);
        rhs[i] = v_bond.adjoint() * k.ops[i] * v_bond;
    }
    // one phase for the whole set, taken from the largest entry across all i
    cx ph = 1.0;
    double best = -1.0;
    for (int i = 0; i < k.phys_dim; ++i) {
        Eigen::Index r = 0, c = 0;
        const double m = rhs[i].cwiseAbs().maxCoeff(&r, &c);
        if (m > best && std::abs(lhs[i](r, c)) > 1e-12) {
            best = m;
            ph = lhs[i](r, c) / rhs[i](r, c);
            ph /= std::abs(ph);
        }
    }
    SymmetryReport rep;
    rep.phase = std::arg(ph);
    for (int i = 0; i < k.phys_dim; ++i)
        rep.deviation = std::max(rep.deviation, max_abs_diff(lhs[i], ph * rhs[i]));
    rep.pass = rep.deviation < eps;
    return rep;
}

}  // namespace mbqc

#endif  // MBQC_MPS_HPP

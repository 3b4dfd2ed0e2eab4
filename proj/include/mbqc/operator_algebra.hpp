#ifndef MBQC_OPERATOR_ALGEBRA_HPP
#define MBQC_OPERATOR_ALGEBRA_HPP

#include "mbqc/linalg.hpp"

#include <array>
#include <numeric>
#include <string>
#include <vector>

// Generalized-Pauli and Lie-algebra operator families used throughout:
// shift/clock words X^j Z^k, generalized Fourier operators F_k, the parity
// permutation, generalized Gell-Mann matrices, recursively built Clifford
// matrices with their spinor bilinears, symplectic generator sets, and the
// Hilbert-Schmidt change of basis between operator bases.

namespace mbqc {

// Ordered operator basis: pairwise Hilbert-Schmidt orthogonal, equal norms.
struct OperatorBasis {
    int dim = 0;
    std::vector<Mat> elems;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(elems.size()); }
};

inline void check_qudit_dim(int d) {
    if (d < 2) throw std::invalid_argument("invalid dimension: d must be >= 2");
}

inline int mod_d(long long v, int d) { return static_cast<int>(((v % d) + d) % d); }

// X^j Z^k with X^j = sum_l |l><l+j| and Z^k = sum_l omega^(kl) |l><l| (indices mod d).
inline Mat weyl(int d, int j, int k) {
    check_qudit_dim(d);
    j = mod_d(j, d);
    k = mod_d(k, d);
    Mat w = Mat::Zero(d, d);
    for (int r = 0; r < d; ++r) {
        const int c = mod_d(r + j, d);
        w(r, c) = omega_root(d, static_cast<long long>(k) * c);
    }
    return w;
}

inline Mat weyl_x(int d, int j = 1) { return weyl(d, j, 0); }
inline Mat weyl_z(int d, int k = 1) { return weyl(d, 0, k); }

// Phase in X^j Z^k = omega^(jk) Z^k X^j.
inline cx weyl_commutation_phase(int d, int j, int k) {
    check_qudit_dim(d);
    return omega_root(d, static_cast<long long>(mod_d(j, d)) * mod_d(k, d));
}

inline std::string weyl_label(int j, int k) {
    std::string s;
    if (j == 1) s += "X";
    else if (j > 1) s += "X" + std::to_string(j);
    if (k == 1) s += "Z";
    else if (k > 1) s += "Z" + std::to_string(k);
    if (s.empty()) s = "I";
    return s;
}

// All nonidentity words X^j Z^k in linear order alpha = j + d*k (X power fast).
inline OperatorBasis weyl_basis(int d, bool include_identity = false) {
    check_qudit_dim(d);
    OperatorBasis basis;
    basis.dim = d;
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            if (!include_identity && j == 0 && k == 0) continue;
            basis.elems.push_back(weyl(d, j, k));
            basis.labels.push_back(weyl_label(j, k));
        }
    return basis;
}

// Generalized Fourier operator (F_k)_{jl} = omega^(kjl)/sqrt(d), gcd(k,d) = 1.
inline Mat fourier_k(int d, int k) {
    check_qudit_dim(d);
    k = mod_d(k, d);
    if (std::gcd(k, d) != 1) throw std::invalid_argument("fourier_k: k not coprime with d");
    Mat f(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) f(r, c) = s * omega_root(d, static_cast<long long>(k) * r * c);
    return f;
}

// Parity permutation Pi = sum_l |l><-l|; equals F_k^2 for every coprime k.
inline Mat permutation_pi(int d) {
    check_qudit_dim(d);
    Mat p = Mat::Zero(d, d);
    for (int r = 0; r < d; ++r) p(r, mod_d(-r, d)) = 1.0;
    return p;
}

// Generalized Gell-Mann matrices for su(n):
//   X_ij = (E_ij + E_ji)/2, Y_ij = -i(E_ij - E_ji)/2  for i < j,
//   Z_j  = (sum_{l<j} E_ll - (j-1) E_jj) / sqrt(2 j (j-1))  for j = 2..n,
// listed X sector, then Y sector, then Z sector, each in lexicographic order.
inline OperatorBasis gellmann_basis(int n) {
    check_qudit_dim(n);
    OperatorBasis basis;
    basis.dim = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Mat m = Mat::Zero(n, n);
            m(i, j) = 0.5;
            m(j, i) = 0.5;
            basis.elems.push_back(m);
            basis.labels.push_back("X" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Mat m = Mat::Zero(n, n);
            m(i, j) = cx(0.0, -0.5);
            m(j, i) = cx(0.0, 0.5);
            basis.elems.push_back(m);
            basis.labels.push_back("Y" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    for (int j = 2; j <= n; ++j) {
        Mat m = Mat::Zero(n, n);
        const double c = 1.0 / std::sqrt(2.0 * j * (j - 1));
        for (int l = 0; l < j - 1; ++l) m(l, l) = c;
        m(j - 1, j - 1) = -c * (j - 1);
        basis.elems.push_back(m);
        basis.labels.push_back("Z" + std::to_string(j));
    }
    return basis;
}

inline Mat pauli(char axis) {
    Mat m(2, 2);
    switch (axis) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cx(0, -1), cx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli: unknown axis");
    }
    return m;
}

// Pauli word from a label like "XZ1Y" ('1' or 'I' for the identity factor).
inline Mat pauli_word(const std::string& word) {
    if (word.empty()) throw std::invalid_argument("pauli_word: empty label");
    Mat m = pauli(word[0] == '1' ? 'I' : word[0]);
    for (size_t k = 1; k < word.size(); ++k) m = kron(m, pauli(word[k] == '1' ? 'I' : word[k]));
    return m;
}

// All nonidentity Pauli words on q qubits (4^q - 1 elements), lexicographic in
// the factor string over 1 < X < Y < Z.
inline OperatorBasis pauli_word_basis(int qubits) {
    if (qubits < 1) throw std::invalid_argument("pauli_word_basis: need at least one qubit");
    OperatorBasis basis;
    basis.dim = 1 << qubits;
    const char axes[4] = {'1', 'X', 'Y', 'Z'};
    std::string word(qubits, '1');
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == qubits) {
            if (word != std::string(qubits, '1')) {
                basis.elems.push_back(pauli_word(word));
                basis.labels.push_back(word);
            }
            return;
        }
        for (char ax : axes) {
            word[pos] = ax;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return basis;
}

// Clifford matrices of SO(2l+1), dimension 2^l. Base case l=1 gives the Pauli
// matrices; the recursion is G_i -> X (x) G_i (i <= 2l-1), G_2l = Y (x) 1, G_{2l+1} = Z (x) 1.
inline OperatorBasis clifford_matrices(int ell) {
    if (ell < 1) throw std::invalid_argument("clifford_matrices: l must be >= 1");
    std::vector<Mat> gam = {pauli('X'), pauli('Y'), pauli('Z')};
    for (int l = 2; l <= ell; ++l) {
        std::vector<Mat> next;
        const Mat id = Mat::Identity(gam[0].rows(), gam[0].cols());
        next.reserve(2 * l + 1);
        for (const Mat& g : gam) next.push_back(kron(pauli('X'), g));
        next.push_back(kron(pauli('Y'), id));
        next.push_back(kron(pauli('Z'), id));
        gam = std::move(next);
    }
    OperatorBasis basis;
    basis.dim = 1 << ell;
    basis.elems = std::move(gam);
    for (int a = 1; a <= 2 * ell + 1; ++a) basis.labels.push_back("G" + std::to_string(a));
    return basis;
}

// Spinor generators of so(2l+1): G_ab = -i G_a G_b for a < b; l(2l+1) of them.
inline OperatorBasis so_spinor_generators(int ell) {
    const OperatorBasis gam = clifford_matrices(ell);
    OperatorBasis basis;
    basis.dim = gam.dim;
    const int count = 2 * ell + 1;
    for (int a = 0; a < count; ++a)
        for (int b = a + 1; b < count; ++b) {
            basis.elems.push_back(cx(0.0, -1.0) * gam.elems[a] * gam.elems[b]);
            basis.labels.push_back("G" + std::to_string(a + 1) + std::to_string(b + 1));
        }
    return basis;
}

// Raw sp(2n) generator set {X_ij (x) s_k, Y_ij (x) 1, Z_j (x) s_k, 1 (x) s_k}
// built from the Gell-Mann sectors of su(n); n(2n+1) elements of dimension 2n.
inline OperatorBasis sp_generators(int n) {
    if (n < 2) throw std::invalid_argument("sp_generators: n must be >= 2");
    const OperatorBasis gm = gellmann_basis(n);
    const int pairs = n * (n - 1) / 2;
    const char axes[3] = {'X', 'Y', 'Z'};
    OperatorBasis basis;
    basis.dim = 2 * n;
    for (int p = 0; p < pairs; ++p)
        for (char ax : axes) {
            basis.elems.push_back(kron(gm.elems[p], pauli(ax)));
            basis.labels.push_back(gm.labels[p] + "*" + ax);
        }
    for (int p = 0; p < pairs; ++p) {
        basis.elems.push_back(kron(gm.elems[pairs + p], Mat::Identity(2, 2)));
        basis.labels.push_back(gm.labels[pairs + p] + "*1");
    }
    for (int j = 0; j < n - 1; ++j)
        for (char ax : axes) {
            basis.elems.push_back(kron(gm.elems[2 * pairs + j], pauli(ax)));
            basis.labels.push_back(gm.labels[2 * pairs + j] + "*" + ax);
        }
    for (char ax : axes) {
        basis.elems.push_back(kron(Mat::Identity(n, n), pauli(ax)));
        basis.labels.push_back(std::string("1*") + ax);
    }
    return basis;
}

namespace detail {

struct SpSectors {
    std::vector<std::string> x, y, z;  // Pauli-word labels on m qubits
};

// Unitarized sector structure for n = 2^m. Each sector element is an exact
// Pauli word; the X sector spans the hollow symmetric matrices, the Y sector
// the antisymmetric ones, the Z sector the traceless diagonals, matching the
// spans of the Gell-Mann sectors of su(n).
inline SpSectors sp_pauli_sectors(int m) {
    SpSectors s{{"X"}, {"Y"}, {"Z"}};
    for (int level = 2; level <= m; ++level) {
        SpSectors next;
        for (const auto& w : s.x) next.x.push_back(w + "1");
        for (const auto& w : s.x) next.x.push_back(w + "X");
        for (const auto& w : s.x) next.x.push_back(w + "Z");
        for (const auto& w : s.y) next.x.push_back(w + "Y");
        for (const auto& w : s.z) next.x.push_back(w + "X");
        next.x.push_back(std::string(level - 1, '1') + "X");
        for (const auto& w : s.y) next.y.push_back(w + "1");
        for (const auto& w : s.y) next.y.push_back(w + "X");
        for (const auto& w : s.y) next.y.push_back(w + "Z");
        for (const auto& w : s.x) next.y.push_back(w + "Y");
        for (const auto& w : s.z) next.y.push_back(w + "Y");
        next.y.push_back(std::string(level - 1, '1') + "Y");
        for (const auto& w : s.z) next.z.push_back(w + "1");
        for (const auto& w : s.z) next.z.push_back(w + "Z");
        next.z.push_back(std::string(level - 1, '1') + "Z");
        s = std::move(next);
    }
    return s;
}

inline int log2_exact(int n) {
    int m = 0;
    while ((1 << m) < n) ++m;
    if ((1 << m) != n) throw std::invalid_argument("value is not a power of two");
    return m;
}

}  // namespace detail

// Unitarized sp(2n) generators for n = 2^m: every element is an exact Pauli
// word on m+1 qubits. Order: {X_ij (x) s_k}, {Y_ij (x) 1}, {Z_j (x) s_k}, {1 (x) s_k}.
inline OperatorBasis sp_canonical_generators(int n) {
    if (n < 2) throw std::invalid_argument("sp_canonical_generators: n must be >= 2");
    const int m = detail::log2_exact(n);
    const auto sectors = detail::sp_pauli_sectors(m);
    OperatorBasis basis;
    basis.dim = 2 * n;
    const char axes[3] = {'X', 'Y', 'Z'};
    for (const auto& w : sectors.x)
        for (char ax : axes) {
            basis.elems.push_back(pauli_word(w + ax));
            basis.labels.push_back(w + ax);
        }
    for (const auto& w : sectors.y) {
        basis.elems.push_back(pauli_word(w + "1"));
        basis.labels.push_back(w + "1");
    }
    for (const auto& w : sectors.z)
        for (char ax : axes) {
            basis.elems.push_back(pauli_word(w + ax));
            basis.labels.push_back(w + ax);
        }
    const std::string ones(m, '1');
    for (char ax : axes) {
        basis.elems.push_back(pauli_word(ones + ax));
        basis.labels.push_back(ones + ax);
    }
    return basis;
}

// Canonical sector sets {X_ij}, {Y_ij}, {Z_j} of su(n) as Pauli words, n = 2^m.
inline std::array<OperatorBasis, 3> sp_sector_bases(int n) {
    const int m = detail::log2_exact(n);
    if (m < 1) throw std::invalid_argument("sp_sector_bases: n must be >= 2");
    const auto sectors = detail::sp_pauli_sectors(m);
    std::array<OperatorBasis, 3> out;
    for (auto& b : out) b.dim = n;
    for (const auto& w : sectors.x) { out[0].elems.push_back(pauli_word(w)); out[0].labels.push_back(w); }
    for (const auto& w : sectors.y) { out[1].elems.push_back(pauli_word(w)); out[1].labels.push_back(w); }
    for (const auto& w : sectors.z) { out[2].elems.push_back(pauli_word(w)); out[2].labels.push_back(w); }
    return out;
}

// Permutation from the (n (x) 2) tensor index i*2+s used by the generator sets
// to the block index s*n+i in which the symplectic form is written.
inline Mat sp_block_permutation(int n) {
    Mat p = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < 2; ++s) p(s * n + i, i * 2 + s) = 1.0;
    return p;
}

// Block symplectic form [[0,-1],[1,0]] of dimension 2n.
inline Mat symplectic_form(int n) {
    if (n < 1) throw std::invalid_argument("symplectic_form: n must be >= 1");
    Mat delta = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        delta(k, n + k) = -1.0;
        delta(n + k, k) = 1.0;
    }
    return delta;
}

namespace detail {

inline void validate_orthogonal_basis(const OperatorBasis& b, const char* who) {
    if (b.elems.empty()) throw std::invalid_argument(std::string(who) + ": empty basis");
    const double norm0 = std::sqrt(std::abs(hs_inner(b.elems[0], b.elems[0])));
    for (size_t i = 0; i < b.elems.size(); ++i) {
        const double ni = std::sqrt(std::abs(hs_inner(b.elems[i], b.elems[i])));
        if (std::abs(ni - norm0) > 1e-9 * std::max(1.0, norm0))
            throw std::invalid_argument(std::string(who) + ": non-orthogonal-basis (unequal norms)");
        for (size_t j = i + 1; j < b.elems.size(); ++j)
            if (std::abs(hs_inner(b.elems[i], b.elems[j])) > 1e-9 * norm0 * norm0)
                throw std::invalid_argument(std::string(who) + ": non-orthogonal-basis");
    }
}

}  // namespace detail

// Hilbert-Schmidt change of basis: returns the unitary U whose columns expand
// the target elements in the source basis, to_b = sum_a from_a * U(a,b), i.e.
// U(a,b) = tr(from_a^dag to_b) / (|from||to|). Both bases must be orthogonal
// with uniform norms; the result is checked to be unitary.
inline Mat basis_change(const OperatorBasis& from, const OperatorBasis& to, double eps = kEps) {
    if (from.size() != to.size()) throw std::invalid_argument("basis_change: mismatched-count");
    if (from.dim != to.dim) throw std::invalid_argument("basis_change: mismatched dimension");
    detail::validate_orthogonal_basis(from, "basis_change(from)");
    detail::validate_orthogonal_basis(to, "basis_change(to)");
    const int k = from.size();
    const double nf = std::sqrt(std::abs(hs_inner(from.elems[0], from.elems[0])));
    const double nt = std::sqrt(std::abs(hs_inner(to.elems[0], to.elems[0])));
    Mat u(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) u(a, b) = hs_inner(from.elems[a], to.elems[b]) / (nf * nt);
    if (!is_unitary(u, eps)) throw std::runtime_error("basis_change: transformation is not unitary");
    return u;
}

// Real doubling of a unitary U = V + iW into S_U = [[V,-W],[W,V]], which is
// orthogonal and preserves the block symplectic form; multiplicative in U.
inline Mat rebit_embed(const Mat& u, double eps = kEps) {
    if (!is_unitary(u, eps)) throw std::invalid_argument("rebit_embed: input not unitary");
    const Eigen::Index n = u.rows();
    Mat s = Mat::Zero(2 * n, 2 * n);
    const Eigen::MatrixXd v = u.real();
    const Eigen::MatrixXd w = u.imag();
    s.topLeftCorner(n, n) = v.cast<cx>();
    s.topRightCorner(n, n) = (-w).cast<cx>();
    s.bottomLeftCorner(n, n) = w.cast<cx>();
    s.bottomRightCorner(n, n) = v.cast<cx>();
    return s;
}

}  // namespace mbqc

#endif  // MBQC_OPERATOR_ALGEBRA_HPP

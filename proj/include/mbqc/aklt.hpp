#ifndef MBQC_AKLT_HPP
#define MBQC_AKLT_HPP

#include "mbqc/linalg.hpp"
#include "mbqc/mps.hpp"
#include "mbqc/operator_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Resource families generalizing the spin-1 AKLT chain. Each family is a
// translation-invariant Kraus set of uniformly weighted unitary words; the
// words double as the byproduct operators of measurement-based computation:
//
//   family          on-site dim    bond dim    byproduct words
//   spin1           3              2           X, Y, Z
//   su(N)           N^2-1          N           shift/clock words X^i Z^j
//   so-fund(l)      2l+1           2^l         Clifford matrices (Pauli words)
//   so-adj(l)       l(2l+1)        2^l         spinor bilinears (Pauli words)
//   sp(m), n=2^m    n(2n+1)        2n          unitarized symplectic generators

namespace mbqc {

struct ResourceFamily {
    std::string tag;
    int phys_dim = 0;
    int bond_dim = 0;
    KrausSet kraus;
    OperatorBasis byproduct_basis;            // unitary words on the bond space, one per Kraus op
    bool kraus_are_words = false;             // A_i = weight * byproduct_basis[i]
    OperatorBasis word_group;                 // full unitary-word basis byproducts reduce over
    std::vector<int> word_slot;               // byproduct_basis[i] = word_slot_phase[i] * word_group[word_slot[i]]
    std::vector<cx> word_slot_phase;
    std::vector<Mat> virtual_algebra;         // Hermitian generators acting on the bond space
    std::vector<std::string> virtual_labels;

    bool words_match_kraus() const { return kraus_are_words; }
};

namespace detail {

enum class WordGroup { weyl, pauli };

inline void attach_word_group(ResourceFamily& fam, WordGroup kind) {
    if (kind == WordGroup::pauli) {
        int q = 0;
        while ((1 << q) < fam.bond_dim) ++q;
        if ((1 << q) != fam.bond_dim) throw std::invalid_argument("attach_word_group: bond dim not a power of two");
        fam.word_group = pauli_word_basis(q);
    } else {
        fam.word_group = weyl_basis(fam.bond_dim);
    }
    fam.word_slot.clear();
    fam.word_slot_phase.clear();
    for (const Mat& w : fam.byproduct_basis.elems) {
        int slot = -2;
        cx ph = 1.0;
        for (int g = 0; g < fam.word_group.size(); ++g) {
            const auto [p, dev] = phase_fit(w, fam.word_group.elems[g]);
            if (dev < 1e-9) {
                slot = g;
                ph = p;
                break;
            }
        }
        if (slot == -2) throw std::runtime_error("attach_word_group: family word outside the word group");
        fam.word_slot.push_back(slot);
        fam.word_slot_phase.push_back(ph);
    }
}

inline ResourceFamily family_from_words(std::string tag, OperatorBasis words, WordGroup kind) {
    ResourceFamily fam;
    fam.tag = std::move(tag);
    fam.phys_dim = words.size();
    fam.bond_dim = words.dim;
    fam.kraus.phys_dim = fam.phys_dim;
    fam.kraus.bond_dim = fam.bond_dim;
    fam.kraus.weight = 1.0 / std::sqrt(static_cast<double>(fam.phys_dim));
    for (const Mat& w : words.elems) {
        if (!is_unitary(w)) throw std::runtime_error("family_from_words: non-unitary word");
        fam.kraus.ops.push_back(fam.kraus.weight * w);
    }
    fam.byproduct_basis = std::move(words);
    fam.kraus_are_words = true;
    attach_word_group(fam, kind);
    return fam;
}

}  // namespace detail

// Spin-1 chain: Kraus {X, Y, Z}/sqrt(3), bond dimension 2.
inline ResourceFamily spin1_family() {
    OperatorBasis words;
    words.dim = 2;
    words.elems = {pauli('X'), pauli('Y'), pauli('Z')};
    words.labels = {"X", "Y", "Z"};
    ResourceFamily fam = detail::family_from_words("spin1", std::move(words), detail::WordGroup::pauli);
    fam.virtual_algebra = {0.5 * pauli('X'), 0.5 * pauli('Y'), 0.5 * pauli('Z')};
    fam.virtual_labels = {"X/2", "Y/2", "Z/2"};
    return fam;
}

// su(N) family: the N^2-1 nonidentity shift/clock words over weight 1/sqrt(N^2-1).
// `transposed` selects the spatially inverted partner state (all words transposed).
inline ResourceFamily su_family(int n, bool transposed = false) {
    check_qudit_dim(n);
    OperatorBasis words = weyl_basis(n);
    if (transposed)
        for (Mat& w : words.elems) w = w.transpose().eval();
    ResourceFamily fam = detail::family_from_words("su(" + std::to_string(n) + ")" + (transposed ? "^T" : ""),
                                               std::move(words), detail::WordGroup::weyl);
    const OperatorBasis gm = gellmann_basis(n);
    fam.virtual_algebra = gm.elems;
    fam.virtual_labels = gm.labels;
    return fam;
}

// SO(2l+1), on-site fundamental irrep: Kraus are the Clifford matrices.
inline ResourceFamily so_fund_family(int ell) {
    ResourceFamily fam = detail::family_from_words("so-fund(" + std::to_string(ell) + ")", clifford_matrices(ell),
                                                     detail::WordGroup::pauli);
    const OperatorBasis gen = so_spinor_generators(ell);
    fam.virtual_algebra = gen.elems;
    fam.virtual_labels = gen.labels;
    return fam;
}

// SO(2l+1), on-site adjoint irrep: Kraus are the spinor bilinears Gamma^ab.
inline ResourceFamily so_adj_family(int ell) {
    OperatorBasis words = so_spinor_generators(ell);
    ResourceFamily fam = detail::family_from_words("so-adj(" + std::to_string(ell) + ")", std::move(words),
                                                     detail::WordGroup::pauli);
    fam.virtual_algebra = fam.byproduct_basis.elems;
    fam.virtual_labels = fam.byproduct_basis.labels;
    return fam;
}

// Sp(2n) with n = 2^m: Kraus are the unitarized (Pauli-word) generators. For
// n not a power of two unitary byproducts are not established; such n are rejected.
inline ResourceFamily sp_family(int m) {
    if (m < 1) throw std::invalid_argument("sp_family: m must be >= 1");
    const int n = 1 << m;
    ResourceFamily fam = detail::family_from_words("sp(" + std::to_string(m) + ")", sp_canonical_generators(n),
                                                     detail::WordGroup::pauli);
    fam.virtual_algebra = fam.byproduct_basis.elems;
    fam.virtual_labels = fam.byproduct_basis.labels;
    return fam;
}

// Product closure of the byproduct words: words[i] * words[j] = phase * words[k]
// (or a phase times the identity). Entry (i,j) with i or j = size() refers to
// the identity slot.
struct ByproductTable {
    int count = 0;                       // number of words; index `count` is the identity
    std::vector<std::vector<int>> index;
    std::vector<std::vector<cx>> phase;

    int identity_slot() const { return count; }
};

inline ByproductTable byproduct_closure_table(const OperatorBasis& words, double eps = 1e-9) {
    const int n = words.size();
    const Mat id = Mat::Identity(words.dim, words.dim);
    auto lookup = [&](const Mat& m) -> std::pair<int, cx> {
        for (int k = 0; k <= n; ++k) {
            const Mat& cand = k == n ? id : words.elems[k];
            const auto [ph, dev] = phase_fit(m, cand);
            if (dev < eps) return {k, ph};
        }
        throw std::runtime_error("byproduct_closure_table: product leaves the word set");
    };
    ByproductTable tab;
    tab.count = n;
    tab.index.assign(n + 1, std::vector<int>(n + 1, 0));
    tab.phase.assign(n + 1, std::vector<cx>(n + 1, cx(1, 0)));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const Mat prod = (i == n ? id : words.elems[i]) * (j == n ? id : words.elems[j]);
            auto [k, ph] = lookup(prod);
            tab.index[i][j] = k;
            tab.phase[i][j] = ph;
        }
    return tab;
}

// Normal-form byproduct word: a single basis element (or identity) and a phase.
struct ByproductWord {
    int index = -1;  // -1 = identity slot
    cx phase = 1.0;
    bool resolved = true;

    static ByproductWord identity() { return {}; }
};

// word = factor * word  (left multiplication, newest factor first).
inline ByproductWord compose_left(const ByproductTable& tab, int factor_index, const ByproductWord& word) {
    ByproductWord out;
    const int i = factor_index < 0 ? tab.identity_slot() : factor_index;
    const int j = word.index < 0 ? tab.identity_slot() : word.index;
    const int k = tab.index[i][j];
    out.index = k == tab.identity_slot() ? -1 : k;
    out.phase = word.phase * tab.phase[i][j];  // words_i words_j = phase_ij words_k
    out.resolved = word.resolved;
    return out;
}

inline Mat byproduct_matrix(const OperatorBasis& words, const ByproductWord& w) {
    const Mat base = w.index < 0 ? Mat(Mat::Identity(words.dim, words.dim)) : words.elems[w.index];
    return w.phase * base;
}

}  // namespace mbqc

#endif  // MBQC_AKLT_HPP

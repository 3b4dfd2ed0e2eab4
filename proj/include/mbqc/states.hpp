#ifndef MBQC_STATES_HPP
#define MBQC_STATES_HPP

#include "mbqc/linalg.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mbqc {

// Dense state vector of N qudits of uniform local dimension d.
// Basis index = i_1 * d^(N-1) + ... + i_N (site 1 is the most significant digit).
struct QuditRegister {
    int d = 2;
    int sites = 1;
    Vec amps;

    QuditRegister() = default;
    QuditRegister(int d_, int sites_) : d(d_), sites(sites_) {
        if (d < 2 || sites < 1) throw std::invalid_argument("QuditRegister: bad dimensions");
        amps = Vec::Zero(dim());
    }

    std::int64_t dim() const {
        std::int64_t n = 1;
        for (int k = 0; k < sites; ++k) n *= d;
        return n;
    }

    std::int64_t stride(int site) const {  // 1-based site index
        std::int64_t s = 1;
        for (int k = site; k < sites; ++k) s *= d;
        return s;
    }

    int digit(std::int64_t index, int site) const { return static_cast<int>(index / stride(site) % d); }

    static QuditRegister uniform(int d, int sites) {
        QuditRegister r(d, sites);
        const double a = 1.0 / std::sqrt(static_cast<double>(r.dim()));
        r.amps.setConstant(a);
        return r;
    }

    void normalize() {
        const double n = amps.norm();
        if (n > 0) amps /= n;
    }
};

inline std::int64_t checked_power(int base, int exp, std::int64_t guard) {
    std::int64_t n = 1;
    for (int k = 0; k < exp; ++k) {
        n *= base;
        if (n > guard) throw std::runtime_error("amplitude budget exceeded");
    }
    return n;
}

// Applies a d x d operator to one site.
inline void apply_site_op(QuditRegister& reg, int site, const Mat& op) {
    if (op.rows() != reg.d || op.cols() != reg.d)
        throw std::invalid_argument("apply_site_op: operator dimension mismatch");
    const std::int64_t str = reg.stride(site);
    const std::int64_t dim = reg.dim();
    const int d = reg.d;
    std::vector<cx> buf(d);
    for (std::int64_t base = 0; base < dim; ++base) {
        if (base / str % d != 0) continue;  // visit each fiber once, at digit 0
        for (int r = 0; r < d; ++r) {
            cx acc = 0.0;
            for (int c = 0; c < d; ++c) acc += op(r, c) * reg.amps(base + c * str);
            buf[r] = acc;
        }
        for (int r = 0; r < d; ++r) reg.amps(base + r * str) = buf[r];
    }
}

// Applies the diagonal entangling phase omega^(order * l_i * l_j) on a pair of sites.
inline void apply_controlled_phase(QuditRegister& reg, int site_i, int site_j, int order) {
    const int d = reg.d;
    const std::int64_t dim = reg.dim();
    std::vector<cx> pow(d);
    for (int k = 0; k < d; ++k) pow[k] = omega_root(d, k);
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        const int li = reg.digit(idx, site_i);
        const int lj = reg.digit(idx, site_j);
        reg.amps(idx) *= pow[static_cast<int>(static_cast<std::int64_t>(order) * li * lj % d)];
    }
}

// Cyclic one-site translation: site n -> n+1 (site N wraps to 1).
inline QuditRegister translate_one_site(const QuditRegister& reg) {
    QuditRegister out(reg.d, reg.sites);
    const std::int64_t dim = reg.dim();
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        std::int64_t shifted = 0;
        for (int site = 1; site <= reg.sites; ++site) {
            const int target = site % reg.sites + 1;
            shifted += static_cast<std::int64_t>(reg.digit(idx, site)) * out.stride(target);
        }
        out.amps(shifted) = reg.amps(idx);
    }
    return out;
}

// Single-site reduced density matrix.
inline Mat reduced_density_site(const QuditRegister& reg, int site) {
    const int d = reg.d;
    Mat rho = Mat::Zero(d, d);
    const std::int64_t str = reg.stride(site);
    const std::int64_t dim = reg.dim();
    for (std::int64_t base = 0; base < dim; ++base) {
        if (base / str % d != 0) continue;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                rho(r, c) += reg.amps(base + r * str) * std::conj(reg.amps(base + c * str));
    }
    return rho;
}

// Projects site 1 onto <ket| and returns the (unnormalized) register on the
// remaining sites. Measurement proceeds along the chain, so the front site goes first.
inline QuditRegister project_first_site(const QuditRegister& reg, const Vec& ket) {
    if (reg.sites < 2) throw std::invalid_argument("project_first_site: nothing would remain");
    if (ket.size() != reg.d) throw std::invalid_argument("project_first_site: outcome vector dimension");
    QuditRegister out(reg.d, reg.sites - 1);
    const std::int64_t block = out.dim();
    for (int v = 0; v < reg.d; ++v)
        out.amps += std::conj(ket(v)) * reg.amps.segment(static_cast<std::int64_t>(v) * block, block);
    return out;
}

}  // namespace mbqc

#endif  // MBQC_STATES_HPP

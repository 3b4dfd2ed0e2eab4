#ifndef MBQC_LINALG_HPP
#define MBQC_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mbqc {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Default tolerance for all operator-identity checks (max-norm).
inline constexpr double kEps = 1e-9;

inline cx omega_root(int d, long long power = 1) {
    if (d < 2) throw std::invalid_argument("omega_root: dimension must be >= 2");
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(((power % d) + d) % d) / d;
    return {std::cos(angle), std::sin(angle)};
}

inline double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Mat& a, const Mat& b, double eps = kEps) {
    return max_abs_diff(a, b) < eps;
}

inline bool is_unitary(const Mat& u, double eps = kEps) {
    if (u.rows() != u.cols()) return false;
    return max_abs_diff(u.adjoint() * u, Mat::Identity(u.rows(), u.cols())) < eps;
}

inline bool is_hermitian(const Mat& a, double eps = kEps) {
    if (a.rows() != a.cols()) return false;
    return max_abs_diff(a, a.adjoint()) < eps;
}

inline bool is_projector(const Mat& p, double eps = kEps) {
    return is_hermitian(p, eps) && max_abs_diff(p * p, p) < eps;
}

// Hilbert-Schmidt inner product tr(A†B).
inline cx hs_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Mat kron(const std::vector<Mat>& factors) {
    if (factors.empty()) throw std::invalid_argument("kron: empty factor list");
    Mat out = factors.front();
    for (size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
    return out;
}

inline Mat mat_power(const Mat& a, int e) {
    if (e < 0) throw std::invalid_argument("mat_power: negative exponent");
    Mat out = Mat::Identity(a.rows(), a.cols());
    for (int k = 0; k < e; ++k) out = out * a;
    return out;
}

// exp(i s H) for Hermitian H, via eigendecomposition.
inline Mat exp_i_hermitian(const Mat& h, double s) {
    if (!is_hermitian(h, 1e-8)) throw std::invalid_argument("exp_i_hermitian: generator not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("exp_i_hermitian: eigensolver failed");
    const auto& w = es.eigenvalues();
    Vec phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::polar(1.0, s * w(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::VectorXd singular_values(const Mat& a) {
    return Eigen::JacobiSVD<Mat>(a).singularValues();
}

inline int numeric_rank(const Mat& a, double tol = 1e-8) {
    const auto sv = singular_values(a);
    if (sv.size() == 0) return 0;
    const double cut = tol * std::max(1.0, sv(0));
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++r;
    return r;
}

// Fits the global phase that best aligns b with a, using the largest-magnitude
// entry of a as reference. Returns (phase, max-norm deviation of a - phase*b).
inline std::pair<cx, double> phase_fit(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("phase_fit: shape mismatch");
    Eigen::Index r = 0, c = 0;
    a.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(a(r, c)) == 0.0 || std::abs(b(r, c)) < 1e-300)
        return {cx{1.0, 0.0}, std::max(max_abs(a), max_abs(b))};
    cx ph = a(r, c) / b(r, c);
    ph /= std::abs(ph);
    return {ph, max_abs_diff(a, ph * b)};
}

inline bool equal_up_to_phase(const Mat& a, const Mat& b, double eps = kEps) {
    return phase_fit(a, b).second < eps;
}

inline std::pair<cx, double> phase_fit_vec(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("phase_fit_vec: size mismatch");
    Eigen::Index r = 0;
    a.cwiseAbs().maxCoeff(&r);
    if (std::abs(a(r)) == 0.0 || std::abs(b(r)) < 1e-300)
        return {cx{1.0, 0.0}, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff())};
    cx ph = a(r) / b(r);
    ph /= std::abs(ph);
    return {ph, (a - ph * b).cwiseAbs().maxCoeff()};
}

inline bool equal_up_to_phase_vec(const Vec& a, const Vec& b, double eps = kEps) {
    return phase_fit_vec(a, b).second < eps;
}

// Extends a column isometry to a full unitary. The defined columns are kept
// bit-for-bit; the complement is drawn from canonical basis vectors in index
// order (Gram-Schmidt with re-orthogonalization), so the result is deterministic.
inline Mat complete_isometry(const Mat& iso) {
    const Eigen::Index n = iso.rows();
    const Eigen::Index k = iso.cols();
    if (k > n) throw std::invalid_argument("complete_isometry: more columns than rows");
    if (max_abs_diff(iso.adjoint() * iso, Mat::Identity(k, k)) > 1e-9)
        throw std::invalid_argument("complete_isometry: input columns not orthonormal");
    Mat u(n, n);
    u.leftCols(k) = iso;
    Eigen::Index have = k;
    for (Eigen::Index cand = 0; cand < n && have < n; ++cand) {
        Vec v = Vec::Zero(n);
        v(cand) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j < have; ++j) v -= u.col(j).dot(v) * u.col(j);
        const double nrm = v.norm();
        if (nrm > 1e-6) u.col(have++) = v / nrm;
    }
    if (have != n) throw std::runtime_error("complete_isometry: completion failed");
    return u;
}

// Deterministic RNG helpers. std::mt19937_64 is bit-stable across platforms,
// and the mappings below avoid implementation-defined distributions so that
// seeded runs are reproducible byte-for-byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return state_(); }

    double uniform() {  // [0,1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) {  // [0,n)
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint64_t span = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<int>(x % span);
    }

    double gaussian() {
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cx gaussian_cx() { return {gaussian(), gaussian()}; }

    Vec random_state(int dim) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v(i) = gaussian_cx();
        const double nrm = v.norm();
        if (nrm == 0.0) return random_state(dim);
        return v / nrm;
    }

    // Haar-random SU(2) element (normalized quaternion).
    Mat random_su2() {
        double q[4];
        double nrm2 = 0.0;
        for (double& qi : q) { qi = gaussian(); nrm2 += qi * qi; }
        const double nrm = std::sqrt(nrm2);
        for (double& qi : q) qi /= nrm;
        Mat u(2, 2);
        u << cx(q[0], q[1]), cx(q[2], q[3]), cx(-q[2], q[3]), cx(q[0], -q[1]);
        return u;
    }

  private:
    std::mt19937_64 state_;
};

// Small exact fraction for outcome-counting results.
struct Fraction {
    long long num = 0;
    long long den = 1;

    Fraction() = default;
    Fraction(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = gcd_ll(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    static long long gcd_ll(long long a, long long b) {
        while (b != 0) { long long t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
};

}  // namespace mbqc

#endif  // MBQC_LINALG_HPP

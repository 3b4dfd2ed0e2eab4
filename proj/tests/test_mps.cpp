#include <catch2/catch_amalgamated.hpp>

#include "mbqc/aklt.hpp"
#include "mbqc/cluster.hpp"
#include "mbqc/mps.hpp"

using namespace mbqc;

namespace {

KrausSet pauli_third_set() {
    KrausSet k;
    k.phys_dim = 3;
    k.bond_dim = 2;
    k.weight = 1.0 / std::sqrt(3.0);
    for (char ax : {'X', 'Y', 'Z'}) k.ops.push_back(k.weight * pauli(ax));
    return k;
}

}  // namespace

TEST_CASE("validate_channel: pass and fail modes") {
    CHECK(validate_channel(pauli_third_set()).pass);
    CHECK(validate_channel(pauli_third_set()).deviation < 1e-15);

    // arbitrary unitaries scaled by 1/sqrt(d) pass
    Rng rng(2);
    KrausSet k;
    k.phys_dim = 2;
    k.bond_dim = 2;
    k.weight = 1.0 / std::sqrt(2.0);
    k.ops = {k.weight * rng.random_su2(), k.weight * rng.random_su2()};
    CHECK(validate_channel(k).pass);

    // unnormalized unitaries fail with deviation d-1
    KrausSet bad = k;
    for (Mat& a : bad.ops) a /= k.weight;
    const auto rep = validate_channel(bad);
    CHECK_FALSE(rep.pass);
    CHECK(rep.deviation == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("dilation_unitary: defining property, unitarity, identity channel") {
    const KrausSet k = pauli_third_set();
    const Mat u = dilation_unitary(k);
    REQUIRE(u.rows() == 6);
    CHECK(is_unitary(u));
    for (int v = 0; v < 2; ++v) {
        Vec want = Vec::Zero(6);
        for (int i = 0; i < 3; ++i) want.segment(2 * i, 2) = k.ops[i].col(v);
        CHECK((u.col(v) - want).cwiseAbs().maxCoeff() < 1e-12);
    }

    KrausSet idchan;
    idchan.phys_dim = 1;
    idchan.bond_dim = 3;
    idchan.weight = 1.0;
    idchan.ops = {Mat::Identity(3, 3)};
    CHECK(max_abs_diff(dilation_unitary(idchan), Mat::Identity(3, 3)) < 1e-12);

    KrausSet invalid = pauli_third_set();
    invalid.ops.pop_back();
    invalid.phys_dim = 2;
    CHECK_THROWS_AS(dilation_unitary(invalid), std::invalid_argument);
}

TEST_CASE("dilation matches the CZ-SWAP construction on its defined columns") {
    KrausSet k;  // per-site qubit cluster channel {H P_s}
    k.phys_dim = 2;
    k.bond_dim = 2;
    k.weight = 1.0 / std::sqrt(2.0);
    const Mat h = fourier_k(2, 1);
    for (int s = 0; s < 2; ++s) {
        Mat p = Mat::Zero(2, 2);
        p(s, s) = 1.0;
        k.ops.push_back(h * p);
    }
    const Mat u = dilation_unitary(k);
    Mat cz = Mat::Identity(4, 4);
    cz(3, 3) = -1;
    Mat swap = Mat::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1;
    const Mat ref = cz * swap * kron(h, Mat::Identity(2, 2));
    CHECK(max_abs_diff(Mat(u.leftCols(2)), Mat(ref.leftCols(2))) < 1e-12);
}

TEST_CASE("dilation matches the uniformly-controlled two-qubit gate for the spin-1 chain") {
    // P00 (x) 1 + P10 (x) X + P01 (x) Z + P11 (x) Y, control = two qubits
    Mat uc = Mat::Zero(8, 8);
    uc.block(0, 0, 2, 2) = Mat::Identity(2, 2);
    uc.block(4, 4, 2, 2) = pauli('X');
    uc.block(2, 2, 2, 2) = pauli('Z');
    uc.block(6, 6, 2, 2) = pauli('Y');
    REQUIRE(is_unitary(uc));
    const KrausSet k = pauli_third_set();
    // on the embedded |+3> control, uc acts exactly as the site tensor
    const int emb[3] = {4, 6, 2};  // outcomes X, Y, Z live at |10>, |11>, |01>
    for (int v = 0; v < 2; ++v) {
        Vec in = Vec::Zero(8);
        for (int i = 0; i < 3; ++i) in(emb[i] + v) = 1.0 / std::sqrt(3.0);
        const Vec out = uc * in;
        Vec want = Vec::Zero(8);
        for (int i = 0; i < 3; ++i) want.segment(emb[i], 2) += k.ops[i].col(v);
        CHECK((out - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("assemble_state: single site gives unitary columns") {
    Rng rng(4);
    const Mat u = rng.random_su2();
    KrausSet k;
    k.phys_dim = 2;
    k.bond_dim = 2;
    k.weight = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 2; ++i) {
        Mat row = Mat::Zero(2, 2);  // A_i = |0><i| style row extraction of u
        row.row(0) = u.row(i);
        k.ops.push_back(row);
    }
    // <R| = <0| picks out row structure: amplitude(i) proportional to u(i, 0) for |L> = |0>
    BoundaryPair b;
    b.left = Vec::Unit(2, 0);
    b.right = Vec::Unit(2, 0);
    const QuditRegister reg = assemble_state(k, 1, b);
    CHECK(equal_up_to_phase_vec(reg.amps, u.col(0)));
}

TEST_CASE("assemble_state agrees with the dilation circuit oracle") {
    for (const auto& fam : {spin1_family(), su_family(2)}) {
        Rng rng(11);
        std::vector<BoundaryPair> boundaries;
        boundaries.push_back(BoundaryPair::defaults(fam.bond_dim));
        BoundaryPair random_pair;
        random_pair.left = rng.random_state(fam.bond_dim);
        random_pair.right = rng.random_state(fam.bond_dim);
        boundaries.push_back(random_pair);
        for (const BoundaryPair& b : boundaries)
            for (int sites : {1, 2, 3, 4}) {
                const QuditRegister direct = assemble_state(fam.kraus, sites, b);
                const Vec circ = dilation_circuit_state(fam.kraus, sites, b.left);
                QuditRegister oracle = project_ancilla(circ, fam.phys_dim, sites, b.right);
                oracle.normalize();
                REQUIRE(equal_up_to_phase_vec(direct.amps, oracle.amps, 1e-10));
            }
    }
}

TEST_CASE("assemble_state is linear in the boundary vectors") {
    const auto fam = spin1_family();
    Rng rng(8);
    const Vec l1 = rng.random_state(2), l2 = rng.random_state(2), r = rng.random_state(2);
    const cx a(0.3, -0.8), b(1.1, 0.2);
    const QuditRegister raw1 = mps_contract_raw(fam.kraus, 3, l1, r);
    const QuditRegister raw2 = mps_contract_raw(fam.kraus, 3, l2, r);
    const QuditRegister mixed = mps_contract_raw(fam.kraus, 3, Vec(a * l1 + b * l2), r);
    CHECK((mixed.amps - (a * raw1.amps + b * raw2.amps)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("blocked cluster MPS equals the entangling-circuit state") {
    for (int d : {2, 3}) {
        const KrausSet k = cluster_blocked_kraus(d, 1);
        for (int blocks : {1, 2}) {
            const ClusterSpec spec = ClusterSpec::symmetric(d, 1, 2 * blocks, Boundary::obc);
            const QuditRegister circuit = build_cluster(spec);
            BoundaryPair b;
            b.left = Vec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));  // |+_d> input
            b.right = Vec::Unit(d, 0);
            const QuditRegister mps = assemble_state(k, blocks, b);
            REQUIRE(equal_up_to_phase_vec(mps.amps, circuit.amps, 1e-10));
        }
    }
}

TEST_CASE("uniform-weight unitary Kraus sets give outcome probability 1/d") {
    const auto fam = su_family(3);
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec v = rng.random_state(3);
        for (const Mat& a : fam.kraus.ops)
            REQUIRE((a * v).squaredNorm() == Catch::Approx(1.0 / 8.0).margin(1e-12));
    }
}

TEST_CASE("check_symmetry_condition: identity, rotation, and error modes") {
    const auto fam = spin1_family();
    const auto id_rep = check_symmetry_condition(
        fam.kraus, Mat::Identity(3, 3), Mat::Identity(2, 2));
    CHECK(id_rep.pass);
    CHECK(std::abs(id_rep.phase) < 1e-12);

    // rotated basis by the lifted X rotation passes with V = X(theta):
    // V^dag Y V = cos(2t) Y - sin(2t) Z and V^dag Z V = sin(2t) Y + cos(2t) Z
    const Mat v = exp_i_hermitian(pauli('X'), -0.7);
    Mat u(3, 3);
    const double c = std::cos(1.4), s = std::sin(1.4);
    u << 1, 0, 0, 0, c, -s, 0, s, c;
    CHECK(check_symmetry_condition(fam.kraus, u, v).pass);

    CHECK_THROWS_AS(check_symmetry_condition(fam.kraus, Mat::Identity(4, 4), Mat::Identity(2, 2)),
                    std::invalid_argument);
}

TEST_CASE("budget guard rejects oversized assemblies") {
    const auto fam = su_family(3);
    BoundaryPair b = BoundaryPair::defaults(3);
    CHECK_THROWS_AS(assemble_state(fam.kraus, 12, b, 1000), std::runtime_error);
}

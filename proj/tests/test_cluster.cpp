#include <catch2/catch_amalgamated.hpp>

#include "mbqc/cluster.hpp"

#include <numeric>

using namespace mbqc;

TEST_CASE("controlled phase gates") {
    Mat cz = Mat::Identity(4, 4);
    cz(3, 3) = -1;
    CHECK(max_abs_diff(controlled_phase(2, 1), cz) < 1e-15);

    // diagonal entries omega^(x i j) at d=3
    const Mat s31 = controlled_phase(3, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(std::abs(s31(i * 3 + j, i * 3 + j) - omega_root(3, i * j)) < 1e-14);

    // order-2 gate at d=4 factorizes through the halved dimension:
    // S^2_4 = 1_2 (x) S^1_2 (x) 1_2 under l = 2q + r... checked entrywise
    const Mat s42 = controlled_phase(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            REQUIRE(std::abs(s42(i * 4 + j, i * 4 + j) - omega_root(2, (i % 2) * (j % 2))) < 1e-14);

    CHECK_THROWS_AS(controlled_phase(3, 3), std::invalid_argument);
}

TEST_CASE("build_cluster: qubit case equals the usual CZ chain") {
    const ClusterSpec spec = ClusterSpec::symmetric(2, 1, 3, Boundary::obc);
    const QuditRegister st = build_cluster(spec);
    QuditRegister want = QuditRegister::uniform(2, 3);
    for (std::int64_t idx = 0; idx < 8; ++idx) {
        const int a = static_cast<int>(idx >> 2 & 1), b = static_cast<int>(idx >> 1 & 1),
                  c = static_cast<int>(idx & 1);
        want.amps(idx) *= std::pow(-1.0, a * b + b * c);
    }
    CHECK((st.amps - want.amps).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stabilizer generators fix the state and commute") {
    for (int d : {2, 3, 4, 5})
        for (int x = 1; x < d; ++x)
            for (int sites : {2, 3, 4, 5, 6})
                for (auto bc : {Boundary::obc, Boundary::pbc}) {
                    const ClusterSpec spec = ClusterSpec::symmetric(d, x, sites, bc);
                    const QuditRegister st = build_cluster(spec);
                    REQUIRE(stabilizer_deviation(spec, st) < 1e-9);
                }

    // generator words carry the printed pattern Z^x X Z^y / Z^y X Z^x
    const ClusterSpec spec = ClusterSpec::symmetric(5, 2, 4, Boundary::pbc);
    const auto words = stabilizer_generators(spec);
    REQUIRE(words.size() == 4);
    CHECK(words[2][0].label == "Z2");  // odd site 3: left neighbor Z^x
    CHECK(words[2][1].label == "X");
    CHECK(words[2][2].label == "Z3");  // right neighbor Z^y
    CHECK(words[1][0].label == "Z3");  // even site 2: left neighbor Z^y
    CHECK(words[1][2].label == "Z2");

    // pairwise commutation as dense operators on the 4-site chain
    const std::int64_t dim = 625;
    std::vector<Mat> dense;
    for (const auto& word : words) {
        QuditRegister reg(5, 4);
        Mat out(dim, dim);
        for (std::int64_t col = 0; col < dim; ++col) {
            reg.amps.setZero();
            reg.amps(col) = 1.0;
            apply_word(reg, word);
            out.col(col) = reg.amps;
        }
        dense.push_back(out);
    }
    for (size_t a = 0; a < dense.size(); ++a)
        for (size_t b = a + 1; b < dense.size(); ++b)
            REQUIRE(max_abs_diff(Mat(dense[a] * dense[b]), Mat(dense[b] * dense[a])) < 1e-9);
}

TEST_CASE("on-site block symmetry maps the pbc state to itself") {
    for (int d : {2, 3}) {
        const ClusterSpec spec = ClusterSpec::symmetric(d, 1, 4, Boundary::pbc);
        const QuditRegister st = build_cluster(spec);
        // X on every odd site (u(g) = X (x) 1 per two-site block)
        QuditRegister moved = st;
        for (int site = 1; site <= 4; site += 2) apply_site_op(moved, site, weyl_x(d));
        CHECK(equal_up_to_phase_vec(moved.amps, st.amps, 1e-10));
        // X on every even site (u(h) = 1 (x) X)
        moved = st;
        for (int site = 2; site <= 4; site += 2) apply_site_op(moved, site, weyl_x(d));
        CHECK(equal_up_to_phase_vec(moved.amps, st.amps, 1e-10));
    }
}

TEST_CASE("pbc cluster equals the one-site translation of the swapped-order state") {
    for (int d : {3, 5})
        for (int x = 1; x < d; ++x) {
            const QuditRegister a = build_cluster(ClusterSpec::symmetric(d, x, 4, Boundary::pbc));
            const QuditRegister b = build_cluster(ClusterSpec::symmetric(d, d - x, 4, Boundary::pbc));
            REQUIRE(equal_up_to_phase_vec(a.amps, translate_one_site(b).amps, 1e-10));
        }
}

TEST_CASE("parent hamiltonian: ground states and degeneracy") {
    {
        const ClusterSpec spec = ClusterSpec::symmetric(2, 1, 4, Boundary::pbc);
        const Mat h = parent_hamiltonian(spec);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const QuditRegister st = build_cluster(spec);
        const double e0 = es.eigenvalues()(0);
        CHECK(e0 == Catch::Approx(-8.0).margin(1e-9));
        CHECK(es.eigenvalues()(1) - e0 > 1e-6);  // unique ground state
        CHECK((h * st.amps - e0 * st.amps).cwiseAbs().maxCoeff() < 1e-9);
    }
    {
        const ClusterSpec spec = ClusterSpec::symmetric(3, 1, 3, Boundary::pbc);
        const Mat h = parent_hamiltonian(spec);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        CHECK(es.eigenvalues()(0) == Catch::Approx(-6.0).margin(1e-9));  // -2N
    }
    {
        const ClusterSpec spec = ClusterSpec::symmetric(3, 1, 4, Boundary::obc);
        const Mat h = parent_hamiltonian(spec);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const auto& ev = es.eigenvalues();
        int degeneracy = 0;
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            if (ev(k) - ev(0) < 1e-9) ++degeneracy;
        CHECK(degeneracy >= 9);  // free edge pair: bond_dim^2
        const QuditRegister st = build_cluster(spec);
        CHECK(st.amps.dot(Vec(h * st.amps)).real() == Catch::Approx(ev(0)).margin(1e-9));
    }
}

TEST_CASE("spt labels") {
    {
        const SptLabel lab = spt_label(2, 1);
        CHECK(lab.bond_dim == 2);
        CHECK(lab.mnc);
        CHECK(std::abs(lab.cocycle_phase - cx(-1, 0)) < 1e-12);
    }
    {
        const SptLabel lab = spt_label(4, 2);
        CHECK(lab.bond_dim == 2);
        CHECK_FALSE(lab.mnc);
        CHECK(std::abs(lab.cocycle_phase - cx(-1, 0)) < 1e-12);
    }
    {
        const SptLabel lab = spt_label(5, 2);
        CHECK(lab.bond_dim == 5);
        CHECK(lab.mnc);
        CHECK(std::abs(lab.cocycle_phase - omega_root(5, 2)) < 1e-12);
    }
    // label phase equals the word commutation phase of the reduced pair
    for (int d = 2; d <= 9; ++d)
        for (int x = 1; x < d; ++x) {
            const SptLabel lab = spt_label(d, x);
            const int b = lab.bond_dim;
            const int a = x / std::gcd(x, d);
            if (b == 1) continue;
            REQUIRE(std::abs(lab.cocycle_phase - weyl_commutation_phase(b, 1, a)) < 1e-12);
            REQUIRE(std::abs(lab.cocycle_phase - omega_root(d, x)) < 1e-12);
        }
}

TEST_CASE("cocycle values and composition") {
    // j = 0 or a = 0 gives 1
    CHECK(std::abs(cocycle(5, 2, 3, 0, 1, 4) - cx(1, 0)) < 1e-15);
    CHECK(std::abs(cocycle(5, 2, 3, 4, 0, 1) - cx(1, 0)) < 1e-15);
    CHECK(std::abs(cocycle(3, 1, 0, 1, 1, 0) - omega_root(3, -1)) < 1e-15);

    for (int d : {2, 3, 4, 5})
        for (int x = 1; x < d; ++x)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) {
                            const Mat lhs = projective_rep(d, x, i, j) * projective_rep(d, x, a, b);
                            const Mat rhs = cocycle(d, x, i, j, a, b) *
                                            projective_rep(d, x, mod_d(i + a, d), mod_d(j + b, d));
                            REQUIRE(max_abs_diff(lhs, rhs) < 1e-12);
                        }
}

TEST_CASE("local-unitary transitions") {
    // identity pattern keeps the state
    {
        const ClusterSpec spec = ClusterSpec::symmetric(3, 1, 4, Boundary::obc);
        CHECK(lu_transition(spec, TransitionPattern::identity(), spec).pass);
    }
    // parity patterns swap the gate orders, both offsets, both boundaries
    for (int d : {4, 5})
        for (int x = 1; x < d; ++x)
            for (auto bc : {Boundary::obc, Boundary::pbc})
                for (int offset : {1, 2}) {
                    const ClusterSpec src = ClusterSpec::symmetric(d, x, 4, bc);
                    const ClusterSpec dst = ClusterSpec::general(d, d - x, x, 4, bc);
                    REQUIRE(lu_transition(src, TransitionPattern::pi_alternating(offset), dst).pass);
                }
    // pair patterns produce the uniform-gate chain
    for (int d : {4, 5})
        for (int x = 1; x < d; ++x) {
            const ClusterSpec src = ClusterSpec::symmetric(d, x, 4, Boundary::obc);
            const ClusterSpec dst = ClusterSpec::general(d, x, x, 4, Boundary::obc);
            REQUIRE(lu_transition(src, TransitionPattern::pi_pairs(0), dst).pass);
            const ClusterSpec src2 = ClusterSpec::general(d, d - x, x, 4, Boundary::obc);
            REQUIRE(lu_transition(src2, TransitionPattern::pi_pairs(3), dst).pass);
        }
    // fourier-pair pattern at d = 5 with F_1 F_3
    {
        const int d = 5, a = 1, x = 3;
        const ClusterSpec cyx = ClusterSpec::general(d, d - x, x, 4, Boundary::obc);  // C(2,3)
        const ClusterSpec cab = ClusterSpec::general(d, a, d - a, 4, Boundary::obc);  // C(1,4)
        REQUIRE(lu_transition(cyx, TransitionPattern::f_ax(a, x, 1), cab).pass);
        REQUIRE(lu_transition(cyx, TransitionPattern::f_ax(a, x, 2), cab).pass);
        const ClusterSpec cxy = ClusterSpec::general(d, x, d - x, 4, Boundary::obc);  // C(3,2)
        const ClusterSpec cba = ClusterSpec::general(d, d - a, a, 4, Boundary::obc);  // C(4,1)
        REQUIRE(lu_transition(cxy, TransitionPattern::f_ax(a, x, 1), cba).pass);
    }
    // local unitaries preserve single-site entropy spectra
    {
        const ClusterSpec src = ClusterSpec::symmetric(5, 1, 4, Boundary::obc);
        const ClusterSpec dst = ClusterSpec::general(5, 4, 1, 4, Boundary::obc);
        const auto res = lu_transition(src, TransitionPattern::pi_alternating(1), dst);
        REQUIRE(res.pass);
        const QuditRegister before = build_cluster(src);
        for (int site = 1; site <= 4; ++site) {
            Eigen::SelfAdjointEigenSolver<Mat> ea(reduced_density_site(before, site));
            Eigen::SelfAdjointEigenSolver<Mat> eb(reduced_density_site(res.state, site));
            REQUIRE((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("lu_transition rejects inconsistent source and target shapes") {
    const ClusterSpec a = ClusterSpec::symmetric(3, 1, 4, Boundary::obc);
    const ClusterSpec b = ClusterSpec::symmetric(4, 1, 4, Boundary::obc);
    CHECK_THROWS_AS(lu_transition(a, TransitionPattern::identity(), b), std::invalid_argument);
    const ClusterSpec c = ClusterSpec::symmetric(3, 1, 5, Boundary::obc);
    CHECK_THROWS_AS(lu_transition(a, TransitionPattern::identity(), c), std::invalid_argument);
}

TEST_CASE("noncoprime factorization") {
    CHECK(factorize_noncoprime(4, 2, 3).pass);
    CHECK(factorize_noncoprime(6, 2, 2).pass);
    CHECK(factorize_noncoprime(6, 3, 2).pass);
    {
        const auto res = factorize_noncoprime(4, 2, 3);
        CHECK(res.b == 2);
        CHECK(res.s == 2);
        CHECK(res.a == 1);
    }
    CHECK_THROWS_AS(factorize_noncoprime(5, 2, 2), std::invalid_argument);
}

TEST_CASE("teleportation projection relations") {
    for (int d : {2, 3, 4, 5})
        for (int x = 1; x < d; ++x) {
            if (std::gcd(x, d) != 1 || std::gcd(d - x, d) != 1) continue;
            const auto rep = teleport_identities(d, x);
            REQUIRE(rep.pass);
            REQUIRE(rep.deviation < 1e-12);
        }
    // the qubit case reduces to X^t Z^s teleportation: HZ^t HZ^s = X^t Z^s
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            const Mat h = fourier_k(2, 1);
            const Mat lhs = h * weyl_z(2, t) * h * weyl_z(2, s);
            CHECK(max_abs_diff(lhs, Mat(weyl_x(2, t) * weyl_z(2, s))) < 1e-13);
        }
}

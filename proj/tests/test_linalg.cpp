#include <catch2/catch_amalgamated.hpp>

#include "mbqc/linalg.hpp"
#include "mbqc/states.hpp"

using namespace mbqc;

TEST_CASE("kron and hs_inner basics") {
    Mat a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    const Mat k = kron(a, b);
    REQUIRE(k.rows() == 4);
    CHECK(std::abs(k(0, 1) - cx(1, 0)) < 1e-15);
    CHECK(std::abs(k(2, 3) - cx(4, 0)) < 1e-15);
    CHECK(std::abs(hs_inner(a, a).real() - (1. + 4. + 9. + 16.)) < 1e-12);
}

TEST_CASE("exp_i_hermitian matches closed form for involutions") {
    Mat z(2, 2);
    z << 1, 0, 0, -1;
    const double th = 0.7313;
    const Mat e = exp_i_hermitian(z, -th);
    Mat want(2, 2);
    want << std::polar(1.0, -th), 0, 0, std::polar(1.0, th);
    CHECK(max_abs_diff(e, want) < 1e-13);
    CHECK(is_unitary(e));
}

TEST_CASE("phase_fit recovers a global phase") {
    Rng rng(11);
    Mat a(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = rng.gaussian_cx();
    const cx ph = std::polar(1.0, 1.234);
    auto [fit, dev] = phase_fit(a, a * (1.0 / ph));
    CHECK(std::abs(fit - ph) < 1e-12);
    CHECK(dev < 1e-12);
    CHECK(equal_up_to_phase(a, ph * a));
}

TEST_CASE("complete_isometry keeps defined columns and is unitary") {
    Mat iso(4, 2);
    iso.setZero();
    iso(2, 0) = 1.0;
    iso(0, 1) = cx(0.0, 1.0);
    const Mat u = complete_isometry(iso);
    CHECK(is_unitary(u));
    CHECK(max_abs_diff(u.leftCols(2), iso) < 1e-15);
}

TEST_CASE("numeric_rank flags projector-type deficiency") {
    Mat p = Mat::Zero(3, 3);
    p(1, 1) = 1.0;
    CHECK(numeric_rank(p) == 1);
    CHECK(is_projector(p));
    CHECK_FALSE(is_projector(2.0 * p));
}

TEST_CASE("seeded rng is reproducible") {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) REQUIRE(a.next_u64() == b.next_u64());
    Rng c(42);
    const Mat u = c.random_su2();
    CHECK(is_unitary(u));
    CHECK(std::abs(u.determinant() - cx(1, 0)) < 1e-12);
}

TEST_CASE("qudit register site ops and strides") {
    QuditRegister reg(3, 3);
    reg.amps(0 * 9 + 1 * 3 + 2) = 1.0;  // |0,1,2>
    CHECK(reg.digit(5, 1) == 0);
    CHECK(reg.digit(5, 2) == 1);
    CHECK(reg.digit(5, 3) == 2);
    Mat shift = Mat::Zero(3, 3);  // |l> -> |l+1>
    for (int l = 0; l < 3; ++l) shift((l + 1) % 3, l) = 1.0;
    apply_site_op(reg, 2, shift);
    CHECK(std::abs(reg.amps(0 * 9 + 2 * 3 + 2) - cx(1, 0)) < 1e-15);

    QuditRegister t = translate_one_site(reg);  // |0,2,2> -> |2,0,2>
    CHECK(std::abs(t.amps(2 * 9 + 0 * 3 + 2) - cx(1, 0)) < 1e-15);
}

TEST_CASE("fractions reduce") {
    CHECK(Fraction(6, 9) == Fraction(2, 3));
    CHECK(Fraction(10, 15).value() == Catch::Approx(2.0 / 3.0));
}

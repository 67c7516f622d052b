#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monoct/curve.hpp"
#include "monoct/es.hpp"

#include <cmath>

using namespace monoct;

namespace {
const cplx rho = cube_root_unity();
const double b_tet = 5.0 * std::sqrt(2.0);

double matdiff(const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); }
} // namespace

TEST_CASE("period structure relations on a b-sweep") {
    RMat H = hmat4();
    CMat Lam = CMat::Zero(4, 4);
    Lam(0, 0) = rho;
    for (int i = 1; i < 4; ++i) Lam(i, i) = rho * rho;
    for (double b : {0.0, 1.0, b_tet, 10.0}) {
        PeriodData pd = periods_symmetric(b);
        // B = H A Lambda
        CHECK(matdiff(pd.B, H.cast<cplx>() * pd.A * Lam) < 1e-9);
        // orthogonality of x against the other columns
        cplx xHb = pd.x.transpose() * H.cast<cplx>() * pd.b_vec;
        cplx xHc = pd.x.transpose() * H.cast<cplx>() * pd.c_vec;
        cplx xHd = pd.x.transpose() * H.cast<cplx>() * pd.d_vec;
        CHECK(std::abs(xHb) < 1e-9);
        CHECK(std::abs(xHc) < 1e-9);
        CHECK(std::abs(xHd) < 1e-9);
        // integral relations: I1/J1 = -I3/J3, I2 + J2 = 0, I4 - J4 = I2
        CHECK(std::abs(pd.I[0] / pd.J[0] + pd.I[2] / pd.J[2]) < 1e-10);
        CHECK(std::abs(pd.I[1] + pd.J[1]) < 1e-10);
        CHECK(std::abs(pd.I[3] - pd.J[3] - pd.I[1]) < 1e-10);
        // x_2 = rho x_1, x_3 = rho^2 x_1
        CHECK(std::abs(pd.x[1] - rho * pd.x[0]) < 1e-10);
        CHECK(std::abs(pd.x[2] - rho * rho * pd.x[0]) < 1e-10);
        // Legendre relation
        cplx leg = (pd.y.transpose() * H.cast<cplx>() * pd.x)(0, 0);
        CHECK(std::abs(leg + 2.0 * kPi / std::sqrt(3.0)) < 1e-9);
        // rank-one form equals the direct quotient A B^{-1}
        PeriodMatrixTau t = period_matrix_from_x(pd.x);
        CHECK(matdiff(t.tau, pd.tau_a.tau) < 1e-9);
        // tau_a tau_b = 1
        CHECK(matdiff(pd.tau_a.tau * pd.tau_b.tau, CMat::Identity(4, 4)) < 1e-9);
        // scaling invariance of the rank-one form
        PeriodMatrixTau t2 = period_matrix_from_x((cplx(2.3, 0.7) * pd.x).eval());
        CHECK(matdiff(t2.tau, t.tau) < 1e-9);
    }
}

TEST_CASE("b = 0 period values") {
    PeriodData pd = periods_symmetric(0.0);
    // alpha = 1, I1 = -(2 pi /(3 sqrt 3)) 2^{-1/3} F(1/3,2/3;1;1/2), J1 = -I1
    cplx F = hyp2f1(cplx(1.0 / 3), cplx(2.0 / 3), 1.0, 0.5);
    cplx want = -(2.0 * kPi / (3.0 * std::sqrt(3.0))) * std::pow(2.0, -1.0 / 3.0) * F;
    CHECK(std::abs(pd.I[0] - want) < 1e-12);
    CHECK(std::abs(pd.J[0] + pd.I[0]) < 1e-12);
}

TEST_CASE("tetrahedral period matrix matches the closed-form display") {
    PeriodData pd = periods_symmetric(b_tet);
    // J1 = -2 I1 at the tetrahedral point
    CHECK(std::abs(pd.J[0] + 2.0 * pd.I[0]) < 1e-11);
    double s3 = std::sqrt(3.0);
    CMat tet(4, 4);
    auto e = [&](double re, double im) { return cplx(re, im * s3) / 98.0; };
    tet << e(-73, 51), e(9, -13), e(15, 11), e(42, -28),
        e(9, -13), e(-34, 60), e(-24, 2), e(21, 35),
        e(15, 11), e(-24, 2), e(-40, 36), e(-63, -7),
        e(42, -28), e(21, 35), e(-63, -7), e(49, 49);
    CHECK(matdiff(pd.tau_a.tau, tet) < 1e-10);
    CHECK(std::abs(pd.tau_a.tau(0, 0) - cplx(-73.0, 51.0 * s3) / 98.0) < 1e-12);
}

TEST_CASE("quadrature oracle validates the closed-form periods") {
    for (double b : {0.0, b_tet}) {
        PeriodData pd = periods_symmetric(b);
        SymmetricCurve sc = SymmetricCurve::from_b(b);
        GeneralSextic gs = GeneralSextic::from_symmetric(sc);
        // first-sheet integral 0 -> alpha is (I1, I2, I3, I4)
        CVec seg = quad_segment(gs, cplx(0.0), cplx(sc.alpha), cplx(-1.0));
        for (int i = 0; i < 4; ++i) CHECK(std::abs(seg[i] - pd.I[i]) < 1e-8);
        // 0 -> beta gives (J1..J4)
        CVec segJ = quad_segment(gs, cplx(0.0), cplx(sc.beta), cplx(-1.0));
        for (int i = 0; i < 4; ++i) CHECK(std::abs(segJ[i] - pd.J[i]) < 1e-8);
        // deck symmetry: du_1 on sheet 2 picks up 1/rho
        CVec s1 = quad_period(gs, 1, 2, 1);
        CVec s2 = quad_period(gs, 1, 2, 2);
        CHECK(std::abs(s2[0] - rho * rho * s1[0]) < 1e-7);
        // orientation reversal
        CVec rev = quad_period(gs, 2, 1, 1);
        CHECK((s1 + rev).cwiseAbs().maxCoeff() < 1e-8);
        // full cycles against the period rows
        CVec a1 = quad_period(gs, 1, 2, 1) + quad_period(gs, 2, 1, 2);
        CHECK((a1 - pd.A.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-7);
        CVec b1 = quad_period(gs, 2, 1, 1) + quad_period(gs, 1, 2, 3);
        CHECK((b1 - pd.B.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-7);
        CVec a2 = quad_period(gs, 3, 4, 1) + quad_period(gs, 4, 3, 2);
        CHECK((a2 - pd.A.row(1).transpose()).cwiseAbs().maxCoeff() < 1e-7);
        CVec a3 = quad_period(gs, 5, 6, 1) + quad_period(gs, 6, 5, 2);
        CHECK((a3 - pd.A.row(2).transpose()).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("branch integrals reproduce cycle decompositions") {
    PeriodData pd = periods_symmetric(b_tet);
    SymmetricCurve sc = SymmetricCurve::from_b(b_tet);
    GeneralSextic gs = GeneralSextic::from_symmetric(sc);
    BranchIntegral g1 = branch_integral(1, 2, 1, pd);
    CVec direct = quad_period(gs, 1, 2, 1);
    CHECK((g1.value - direct).cwiseAbs().maxCoeff() < 1e-7);
    BranchIntegral g2 = branch_integral(1, 2, 2, pd);
    CVec direct2 = quad_period(gs, 1, 2, 2);
    CHECK((g2.value - direct2).cwiseAbs().maxCoeff() < 1e-7);
    // closure over the three sheets
    CVec sum = CVec::Zero(4);
    for (int s = 1; s <= 3; ++s) sum += branch_integral(1, 2, s, pd).value;
    CHECK(sum.cwiseAbs().maxCoeff() < 1e-9);
    for (int s = 1; s <= 3; ++s) {
        CVec direct_s = quad_period(gs, 1, 6, s);
        BranchIntegral bi = branch_integral(1, 6, s, pd);
        CHECK((bi.value - direct_s).cwiseAbs().maxCoeff() < 1e-7);
    }
    // the (4,5) pair is defined modulo the lattice
    BranchIntegral b45 = branch_integral(4, 5, 1, pd);
    CHECK(b45.mod_lattice);
    CVec d45 = quad_period(gs, 4, 5, 1);
    LatticeReduction red = reduce_mod_lattice(
        (pd.B.inverse().transpose() * (b45.value - d45)).eval(), pd.tau_a);
    CHECK(red.residual_norm < 1e-7);
}

TEST_CASE("abel maps between infinities") {
    PeriodData pd = periods_symmetric(b_tet);
    auto q = abel_infinities(pd);
    CHECK(std::abs(q[0][0] - (rho - 1.0) * pd.J[0]) < 1e-12);
    CHECK((q[0] + q[2] - q[1]).cwiseAbs().maxCoeff() < 1e-12);
    AbelFamily fam = abel_family(pd);
    // theta(phi(inf_j) - phi(inf_i) - Kt) = 0 (special divisors)
    CVec one = CVec::Ones(4);
    CVec Kt = 0.5 * (one + pd.tau_a.tau * one);
    for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
        CVec arg = fam.phi_inf(j) - fam.phi_inf(i) - Kt;
        cplx v = theta0(arg, pd.tau_a);
        CHECK(std::abs(v) < 1e-6);
    }
    // ray family reproduces the closed forms modulo the lattice after the
    // sheet relabeling: quadrature(inf1 -> inf2) = -Lambda * closed(1,2)
    CMat Lam = CMat::Zero(4, 4);
    Lam(0, 0) = rho;
    for (int i = 1; i < 4; ++i) Lam(i, i) = rho * rho;
    CVec direct = fam.to_infinity[1] - fam.to_infinity[0];
    LatticeReduction red2 =
        reduce_mod_lattice((pd.B.inverse().transpose() * (direct + Lam * q[0])).eval(), pd.tau_a);
    CHECK(red2.residual_norm < 1e-6);
}

TEST_CASE("riemann constants identify the even singular half period") {
    PeriodData pd = periods_symmetric(b_tet);
    RiemannConstants rc = riemann_constants(pd);
    CHECK(rc.lattice_residual < 1e-6);
    CVec one = CVec::Ones(4);
    CVec Kt = 0.5 * (one + pd.tau_a.tau * one);
    CHECK(std::abs(theta0(Kt, pd.tau_a)) < 1e-9);
    LatticeReduction red = reduce_mod_lattice((2.0 * Kt).eval(), pd.tau_a);
    CHECK(red.residual_norm < 1e-9);
    CHECK(char_parity(ThetaCharacteristic::half({1, 1, 1, 1}, {1, 1, 1, 1})) == Parity::Even);
}

TEST_CASE("branch point recovery round trip") {
    for (double b : {0.0, b_tet}) {
        PeriodData pd = periods_symmetric(b);
        RecoveredBranchPoints rec = recover_branch_points(pd.tau_a);
        SymmetricCurve sc = SymmetricCurve::from_b(b);
        GeneralSextic gs = GeneralSextic::from_symmetric(sc);
        RecoveredBranchPoints dir = normalized_branch_points(gs);
        CHECK(std::abs(rec.L1 - dir.L1) < 1e-8);
        CHECK(std::abs(rec.L2 - dir.L2) < 1e-8);
        CHECK(std::abs(rec.L3 - dir.L3) < 1e-8);
        // scaling invariance under x -> lambda x
        PeriodMatrixTau t2 = period_matrix_from_x((cplx(0.4, 1.1) * pd.x).eval());
        RecoveredBranchPoints rec2 = recover_branch_points(t2);
        CHECK(std::abs(rec2.L1 - rec.L1) < 1e-8);
        // the monopole curve has the reality property
        auto mr = mobius_reality_check(dir.L1, dir.L2, dir.L3);
        CHECK(mr.equivalent);
    }
}

TEST_CASE("mobius reality cases") {
    cplx L1(-1.0, 0.0), L2(1.0, 1.0);
    cplx L3 = std::conj(L1 / L2);
    auto r = mobius_reality_check(L1, L2, L3);
    CHECK(r.equivalent);
    CHECK(r.case_label == 'a');
    auto r2 = mobius_reality_check(cplx(0.3, 0.4), cplx(-1.2, 0.7), cplx(2.0, -0.3));
    CHECK_FALSE(r2.equivalent);
}

TEST_CASE("cover invariants") {
    for (double b : {0.0, 1.0, b_tet}) {
        CoverInvariants ci = cover_invariants(b);
        cplx p = ci.p;
        cplx kp = std::pow(p + 1.0, 3.0) * (3.0 - p) / (16.0 * p);
        cplx km = (p + 1.0) * std::pow(3.0 - p, 3.0) / (16.0 * p * p * p);
        CHECK(std::abs(kp - ci.k_plus_sq) < 1e-9 * (1.0 + std::abs(kp)));
        CHECK(std::abs(km - ci.k_minus_sq) < 1e-9 * (1.0 + std::abs(km)));
        auto jleg = [](cplx m) {
            return 256.0 * std::pow(m * m - m + 1.0, 3.0) / (m * m * (m - 1.0) * (m - 1.0));
        };
        CHECK(std::abs(jleg(ci.k_plus_sq) - ci.j_plus) < 1e-6 * (1.0 + std::abs(ci.j_plus)));
        CHECK(std::abs(jleg(ci.k_minus_sq) - ci.j_minus) < 1e-6 * (1.0 + std::abs(ci.j_minus)));
        CHECK(ci.j1_equianharmonic < 1e-6);
        CHECK(ci.j2_equianharmonic < 1e-6);
    }
}

TEST_CASE("involution matrix checks") {
    InvolutionData inv = InvolutionData::standard();
    IMat M2 = inv.M * inv.M;
    CHECK((M2 - IMat::Identity(8, 8)).cwiseAbs().maxCoeff() == 0);
    IMat J = IMat::Zero(8, 8);
    for (int i = 0; i < 4; ++i) {
        J(i, 4 + i) = 1;
        J(4 + i, i) = -1;
    }
    CHECK((inv.M * J * inv.M.transpose() + J).cwiseAbs().maxCoeff() == 0);
    PeriodData pd = periods_symmetric(b_tet);
    CHECK(involution_check(pd, inv) < 1e-8);
    auto [n, m] = extend_vectors(1, 1);
    IVec row(8);
    row.head(4) = n;
    row.tail(4) = m;
    IVec out = inv.M.transpose() * row;
    CHECK((out + row).cwiseAbs().maxCoeff() == 0);
}

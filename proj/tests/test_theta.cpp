#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monoct/theta.hpp"

#include <cmath>
#include <random>

using namespace monoct;

namespace {

std::mt19937_64 rng(20240817);

double urand(double lo, double hi) {
    return lo + (hi - lo) * double(rng() % 1000001) / 1000000.0;
}

PeriodMatrixTau random_tau(int g) {
    RMat X(g, g), S(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            X(i, j) = urand(-0.4, 0.4);
            S(i, j) = urand(-0.5, 0.5);
        }
    X = 0.5 * (X + X.transpose()).eval();
    RMat Y = S * S.transpose() + RMat::Identity(g, g) * urand(0.6, 1.2);
    PeriodMatrixTau t;
    t.tau = X.cast<cplx>() + cplx(0, 1) * Y.cast<cplx>();
    return t;
}

CVec random_z(int g, double scale = 0.7) {
    CVec z(g);
    for (int i = 0; i < g; ++i) z[i] = cplx(urand(-scale, scale), urand(-scale, scale));
    return z;
}

// brute-force lattice sum over a large fixed box (independent oracle)
cplx theta_brute(const CVec& z, const PeriodMatrixTau& tau, const ThetaCharacteristic& ch,
                 int N) {
    int g = tau.genus();
    std::vector<long long> n(g, -N);
    cplx sum = 0.0;
    RVec a = ch.a_real(), b = ch.b_real();
    while (true) {
        CVec na(g);
        for (int i = 0; i < g; ++i) na[i] = double(n[i]) + a[i];
        cplx q = 0.0, lin = 0.0;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) q += na[i] * tau.tau(i, j) * na[j];
            lin += na[i] * (z[i] + b[i]);
        }
        sum += std::exp(cplx(0, kPi) * q + cplx(0, 2.0 * kPi) * lin);
        int k = 0;
        for (; k < g; ++k) {
            if (++n[k] <= N) break;
            n[k] = -N;
        }
        if (k == g) break;
    }
    return sum;
}

} // namespace

TEST_CASE("parity of half characteristics") {
    CHECK(char_parity(ThetaCharacteristic::half({1}, {1})) == Parity::Odd);
    CHECK(char_parity(ThetaCharacteristic::half({0}, {0})) == Parity::Even);
    CHECK(char_parity(ThetaCharacteristic::half({1, 1, 1, 1}, {1, 1, 1, 1})) == Parity::Even);
    ThetaCharacteristic sixth;
    sixth.a = {Rational(1, 6)};
    sixth.b = {Rational(1, 2)};
    CHECK_THROWS_AS(char_parity(sixth), DomainError);
}

TEST_CASE("theta matches brute-force double sum at g=2") {
    for (int trial = 0; trial < 5; ++trial) {
        PeriodMatrixTau tau = random_tau(2);
        CVec z = random_z(2);
        cplx fast = theta0(z, tau);
        cplx brute = theta_brute(z, tau, ThetaCharacteristic::zero(2), 12);
        CHECK(std::abs(fast - brute) < 1e-10 * std::max(1.0, std::abs(brute)));
    }
}

TEST_CASE("odd characteristic vanishes at z=0") {
    PeriodMatrixTau tau = random_tau(1);
    CVec z0 = CVec::Zero(1);
    cplx v = theta(z0, tau, ThetaCharacteristic::half({1}, {1}));
    CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("quasi-periodicity, parity, characteristic shifts, genus 1..4") {
    ToleranceConfig cfg;
    for (int g = 1; g <= 4; ++g) {
        int trials = (g == 4) ? 6 : 25;
        for (int trial = 0; trial < trials; ++trial) {
            PeriodMatrixTau tau = random_tau(g);
            CVec z = random_z(g, 0.5);
            IVec p(g);
            for (int i = 0; i < g; ++i) p[i] = (long long)(rng() % 3) - 1;
            CVec pc(g);
            for (int i = 0; i < g; ++i) pc[i] = double(p[i]);
            cplx base = theta0(z, tau, {}, cfg);
            // integer shift
            cplx s1 = theta0(z + pc, tau, {}, cfg);
            CHECK(std::abs(s1 - base) < 1e-10 * std::max(1.0, std::abs(base)));
            // tau-lattice shift
            CVec zt = z + tau.tau * pc;
            cplx s2 = theta0(zt, tau, {}, cfg);
            cplx fac = std::exp(-cplx(0, kPi) * ((pc.transpose() * tau.tau * pc)(0, 0) +
                                                 2.0 * (z.transpose() * pc)(0, 0)));
            CHECK(std::abs(s2 - fac * base) < 1e-9 * std::max(1.0, std::abs(fac * base)));
            // parity theta_{-a,-b}(z) = theta_{a,b}(-z)
            ThetaCharacteristic ch;
            for (int i = 0; i < g; ++i) {
                ch.a.push_back(Rational((long long)(rng() % 2), 2));
                ch.b.push_back(Rational((long long)(rng() % 2), 2));
            }
            ThetaCharacteristic chm;
            for (int i = 0; i < g; ++i) {
                chm.a.push_back(-ch.a[i]);
                chm.b.push_back(-ch.b[i]);
            }
            cplx lhs = theta(z, tau, chm, {}, cfg);
            cplx rhs = theta((-z).eval(), tau, ch, {}, cfg);
            CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
            // integer characteristic shift: theta_{a+p, b+q} = exp(2 pi i a.q) theta_{a,b}
            ThetaCharacteristic chs = ch;
            IVec q(g);
            Rational phase(0);
            for (int i = 0; i < g; ++i) {
                long long pi_ = (long long)(rng() % 3) - 1, qi = (long long)(rng() % 3) - 1;
                chs.a[i] = chs.a[i] + Rational(pi_);
                chs.b[i] = chs.b[i] + Rational(qi);
                phase = phase + ch.a[i] * Rational(qi);
                q[i] = qi;
            }
            cplx lhs2 = theta(z, tau, chs, {}, cfg);
            cplx rhs2 = expi2pi(phase) * theta(z, tau, ch, {}, cfg);
            CHECK(std::abs(lhs2 - rhs2) < 1e-10 * std::max(1.0, std::abs(rhs2)));
        }
    }
}

TEST_CASE("characteristic shift law with rational offsets") {
    ToleranceConfig cfg;
    for (int g : {1, 2}) {
        PeriodMatrixTau tau = random_tau(g);
        CVec z = random_z(g, 0.4);
        ThetaCharacteristic ch = ThetaCharacteristic::zero(g), chp = ThetaCharacteristic::zero(g);
        RationalVec ap(g, Rational(0)), bp(g, Rational(0));
        for (int i = 0; i < g; ++i) {
            ap[i] = Rational((long long)(rng() % 3) - 1, 2);
            bp[i] = Rational((long long)(rng() % 3) - 1, 2);
            chp.a[i] = ap[i];
            chp.b[i] = bp[i];
        }
        // theta_{a,b}(z + a' tau + b') = exp(-i pi a' tau a' - 2 pi i a'.z - 2 pi i (b+b').a') theta_{a+a', b+b'}(z)
        CVec shift(g);
        for (int i = 0; i < g; ++i) {
            shift[i] = bp[i].value();
            for (int j = 0; j < g; ++j) shift[i] += tau.tau(i, j) * ap[j].value();
        }
        cplx lhs = theta((z + shift).eval(), tau, ch, {}, cfg);
        cplx quad = 0.0, lin = 0.0;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) quad += ap[i].value() * tau.tau(i, j) * ap[j].value();
            lin += ap[i].value() * z[i] + bp[i].value() * ap[i].value();
        }
        cplx rhs = std::exp(-cplx(0, kPi) * quad - cplx(0, 2.0 * kPi) * lin) *
                   theta(z, tau, chp, {}, cfg);
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("derivatives: termwise sums match finite differences") {
    ToleranceConfig cfg;
    PeriodMatrixTau tau = random_tau(3);
    CVec z = random_z(3, 0.4);
    CVec d1 = random_z(3, 1.0), d2 = random_z(3, 1.0);
    cplx der = theta0(z, tau, {d1}, cfg);
    double h = 1e-5;
    cplx fd = (theta0((z + h * d1).eval(), tau, {}, cfg) -
               theta0((z - h * d1).eval(), tau, {}, cfg)) /
              (2.0 * h);
    CHECK(std::abs(der - fd) < 1e-6 * std::max(1.0, std::abs(der)));
    cplx der2 = theta0(z, tau, {d1, d2}, cfg);
    cplx fd2 = (theta0((z + h * d2).eval(), tau, {d1}, cfg) -
                theta0((z - h * d2).eval(), tau, {d1}, cfg)) /
               (2.0 * h);
    CHECK(std::abs(der2 - fd2) < 1e-5 * std::max(1.0, std::abs(der2)));
}

TEST_CASE("jacobi theta identities") {
    ToleranceConfig cfg;
    cplx tau(0.13, 1.1);
    CHECK(std::abs(jacobi_theta(1, 0.0, tau)) < 1e-13);
    cplx t2 = jacobi_theta(2, 0.0, tau), t3 = jacobi_theta(3, 0.0, tau),
         t4 = jacobi_theta(4, 0.0, tau);
    cplx d1 = jacobi_theta_dz(1, 0.0, tau);
    CHECK(std::abs(d1 - kPi * t2 * t3 * t4) < 1e-11 * std::abs(d1));
    // theta1(x + (1+tau)/2) = exp(-i pi (x + tau/4)) theta3(x)
    cplx x(0.21, 0.03);
    cplx lhs = jacobi_theta(1, x + 0.5 * (1.0 + tau), tau);
    cplx rhs = std::exp(-cplx(0, kPi) * (x + 0.25 * tau)) * jacobi_theta(3, x, tau);
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(rhs)));
    CHECK_THROWS_AS(jacobi_theta(3, 0.0, cplx(0.3, -1.0)), DomainError);
}

TEST_CASE("modular transform of characteristics") {
    // identity leaves everything alone
    SymplecticTransform id = SymplecticTransform::identity(2);
    ThetaCharacteristic ch = ThetaCharacteristic::half({1, 0}, {0, 1});
    auto out = modular_transform_char(ch, id);
    CHECK(out.phase == Rational(0));
    for (int i = 0; i < 2; ++i) {
        CHECK(out.transformed.a[i] == ch.a[i]);
        CHECK(out.transformed.b[i] == ch.b[i]);
    }
    // Igusa consistency with |mu| = 1 over random symplectics at g=2
    ToleranceConfig cfg;
    int tested = 0;
    for (int trial = 0; trial < 30 && tested < 10; ++trial) {
        SymplecticTransform s = SymplecticTransform::identity(2);
        for (int it = 0; it < 3; ++it) {
            IMat gen = IMat::Identity(4, 4);
            int kind = int(rng() % 3);
            long long kk = (long long)(rng() % 3) - 1;
            if (kind == 0) {
                gen(0, 2) = kk;
                gen(1, 3) = kk;
            } else if (kind == 1) {
                gen(2, 0) = kk;
                gen(3, 1) = kk;
            } else {
                gen.setZero();
                gen.topRightCorner(2, 2) = IMat::Identity(2, 2);
                gen.bottomLeftCorner(2, 2) = -IMat::Identity(2, 2);
            }
            s.m = (gen * s.m).eval();
        }
        REQUIRE(s.is_symplectic());
        PeriodMatrixTau tau = random_tau(2);
        auto tr = modular_transform_char(ch, s);
        CMat A = s.blockA().cast<double>().cast<cplx>(), B = s.blockB().cast<double>().cast<cplx>();
        CMat C = s.blockC().cast<double>().cast<cplx>(), D = s.blockD().cast<double>().cast<cplx>();
        CMat Cz = C * tau.tau + D;
        CMat nt = (A * tau.tau + B) * Cz.inverse();
        PeriodMatrixTau tau2{0.5 * (nt + nt.transpose()).eval()};
        CVec z = random_z(2, 0.3);
        CVec z2 = Cz.inverse().transpose() * z;
        cplx lhs = theta(z2, tau2, tr.transformed, {}, cfg);
        cplx quad = std::exp(cplx(0, kPi) * (z.transpose() * Cz.inverse() * C * z)(0, 0));
        cplx rhs = quad * std::sqrt(Cz.determinant()) * theta(z, tau, ch, {}, cfg);
        CHECK(std::abs(std::abs(lhs / rhs) - 1.0) < 1e-9);
        ++tested;
    }
    CHECK(tested == 10);
}

TEST_CASE("theta line evaluator agrees with direct evaluation") {
    ToleranceConfig cfg;
    PeriodMatrixTau tau = random_tau(4);
    CVec w0 = random_z(4, 0.6), w1 = random_z(4, 0.5);
    ThetaLine line(w0, w1, tau, -1.0, 1.0, cfg);
    for (double t : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
        cplx direct = theta0((w0 + t * w1).eval(), tau, {}, cfg);
        CHECK(std::abs(line.value(t) - direct) < 1e-9 * std::max(1.0, std::abs(direct)));
    }
    double h = 1e-6;
    cplx fd = (line.value(0.3 + h) - line.value(0.3 - h)) / (2.0 * h);
    CHECK(std::abs(line.deriv(0.3) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("theta reduction: trivial and block-diagonal splits") {
    ToleranceConfig cfg;
    // block diagonal: Q = 0 factorizes exactly
    PeriodMatrixTau t1 = random_tau(1), t2 = random_tau(1);
    PeriodMatrixTau tau;
    tau.tau = CMat::Zero(2, 2);
    tau.tau(0, 0) = t1.tau(0, 0);
    tau.tau(1, 1) = t2.tau(0, 0);
    CVec z = random_z(1, 0.3), w = random_z(1, 0.3);
    cplx split = theta_reduce(z, w, tau, 1, cfg);
    cplx prod = theta0(z, t1, {}, cfg) * theta0(w, t2, {}, cfg);
    CHECK(std::abs(split - prod) < 1e-10 * std::max(1.0, std::abs(prod)));

    // rational off-diagonal block: split equals the direct genus-2 sum
    PeriodMatrixTau tq = tau;
    tq.tau(0, 1) = tq.tau(1, 0) = cplx(0.5, 0.0);
    cplx split2 = theta_reduce(z, w, tq, 1, cfg);
    CVec full(2);
    full[0] = z[0];
    full[1] = w[0];
    cplx direct = theta0(full, tq, {}, cfg);
    CHECK(std::abs(split2 - direct) < 1e-9 * std::max(1.0, std::abs(direct)));

    // irrational block rejected
    PeriodMatrixTau tb = tau;
    tb.tau(0, 1) = tb.tau(1, 0) = cplx(1.0 / std::sqrt(17.0), 0.0);
    CHECK_THROWS_AS(theta_reduce(z, w, tb, 1, cfg), DomainError);
}

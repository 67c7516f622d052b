#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monoct/special.hpp"

#include <cmath>
#include <random>

using namespace monoct;

namespace {
double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// adaptive Simpson quadrature oracle for the defining elliptic integral
double K_quadrature(double k) {
    auto f = [&](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
    int n = 1 << 16;
    double h = (kPi / 2.0) / n, s = f(0.0) + f(kPi / 2.0);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}
} // namespace

TEST_CASE("gamma basics and identities") {
    CHECK(rel_err(gamma_c(1.0), 1.0) < 1e-14);
    CHECK(rel_err(gamma_c(0.5), std::sqrt(kPi)) < 1e-13);
    CHECK(rel_err(gamma_c(5.0), 24.0) < 1e-13);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    for (double z : {0.17, 0.63, 1.31, -0.42}) {
        cplx lhs = gamma_c(z) * gamma_c(1.0 - z);
        cplx rhs = kPi / std::sin(kPi * z);
        CHECK(rel_err(lhs, rhs) < 1e-12);
    }
    // duplication: Gamma(z) Gamma(z + 1/2) = 2^{1-2z} sqrt(pi) Gamma(2z)
    for (double z : {1.0 / 6.0, 1.0 / 3.0, 0.8}) {
        cplx lhs = gamma_c(z) * gamma_c(z + 0.5);
        cplx rhs = std::pow(2.0, 1.0 - 2.0 * z) * std::sqrt(kPi) * gamma_c(2.0 * z);
        CHECK(rel_err(lhs, rhs) < 1e-12);
    }
    CHECK_THROWS_AS(gamma_c(-3.0), DomainError);
}

TEST_CASE("hyp2f1 special values") {
    CHECK(rel_err(hyp2f1(cplx(1.0 / 3), cplx(1.0 / 3), 1.0, 0.0), 1.0) == 0.0);
    // Euler integral oracle: F(a,b;c;z) = G(c)/(G(b)G(c-b)) int_0^1 t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} dt
    auto euler_oracle = [](double a, double b, double c, double z) {
        int n = 1 << 18;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            // substitution t = u^3/(...) handles the t^{-2/3} endpoint; plain
            // midpoint with u^3 clustering at both ends
            double u = (i + 0.5) / n;
            double t, omt, dt; // cubic clustering regularizes the endpoint powers
            if (u < 0.5) {
                t = 4.0 * u * u * u;
                omt = 1.0 - t;
                dt = 12.0 * u * u / n;
            } else {
                omt = 4.0 * (1.0 - u) * (1.0 - u) * (1.0 - u);
                t = 1.0 - omt;
                dt = 12.0 * (1.0 - u) * (1.0 - u) / n;
            }
            s += std::pow(t, b - 1.0) * std::pow(omt, c - b - 1.0) *
                 std::pow((1.0 - z) + z * omt, -a) * dt;
        }
        return (gamma_c(c) / (gamma_c(b) * gamma_c(c - b))).real() * s;
    };
    for (double z : {0.5, -3.0, 0.95, -0.25}) {
        cplx v = hyp2f1(cplx(1.0 / 3), cplx(1.0 / 3), 1.0, z);
        double want = euler_oracle(1.0 / 3, 1.0 / 3, 1.0, z);
        CHECK(rel_err(v, want) < 1e-6);
    }

    // the tetrahedral evaluation
    double t = 0.5 - 5.0 * std::sqrt(3.0) / 18.0;
    cplx got = hyp2f1(cplx(1.0 / 3), cplx(2.0 / 3), 1.0, t);
    cplx g16 = gamma_c(1.0 / 6.0), g13 = gamma_c(1.0 / 3.0);
    cplx expect = 3.0 * g16 * g13 / (8.0 * std::pow(kPi, 1.5));
    CHECK(rel_err(got, expect) < 1e-12);

    // the related sixth-parameter value
    cplx got2 = hyp2f1(cplx(1.0 / 6), cplx(2.0 / 3), 1.0, -2.0 / 25.0);
    cplx expect2 = std::cbrt(5.0) * 3.0 / 8.0 * g16 * g13 / (std::sqrt(3.0) * std::pow(kPi, 1.5));
    CHECK(rel_err(got2, expect2) < 1e-12);

    CHECK_THROWS_AS(hyp2f1(cplx(0.5), cplx(0.5), cplx(-2.0), cplx(0.3)), DomainError);
    CHECK_THROWS_AS(hyp2f1(cplx(0.5), cplx(0.5), cplx(1.0), cplx(1.5)), DomainError);
}

TEST_CASE("hyp2f1 pfaff transformation sweep") {
    // 2F1(1/3,1/3;1;x) = (1-x)^{-1/3} 2F1(1/3,2/3;1;x/(x-1)) on (-5, 0.9)
    for (double x = -5.0; x < 0.9; x += 0.37) {
        if (std::abs(x) < 1e-9) continue;
        cplx lhs = hyp2f1(cplx(1.0 / 3), cplx(1.0 / 3), 1.0, x);
        cplx rhs = std::pow(cplx(1.0 - x), -1.0 / 3.0) *
                   hyp2f1(cplx(1.0 / 3), cplx(2.0 / 3), 1.0, x / (x - 1.0));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("ramanujan cubic-signature identity sweep") {
    for (int i = 1; i <= 9; ++i) {
        double p = 0.1 * i;
        cplx lhs = (1.0 + p + p * p) *
                   hyp2f1(cplx(0.5), cplx(0.5), 1.0, p * p * p * (2.0 + p) / (1.0 + 2.0 * p));
        cplx rhs = std::sqrt(1.0 + 2.0 * p) *
                   hyp2f1(cplx(1.0 / 3), cplx(2.0 / 3), 1.0,
                          27.0 * p * p * (1.0 + p) * (1.0 + p) /
                              (4.0 * std::pow(1.0 + p + p * p, 3.0)));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("goursat quadratic identity") {
    for (double b : {1.0, 5.0 * std::sqrt(2.0), 10.0}) {
        double s = std::sqrt(b * b + 4.0);
        cplx lhs = hyp2f1(cplx(0.5), cplx(1.0 / 3), 1.0, cplx(0, 4.0) / cplx(-b, 2.0));
        cplx rhs = std::pow(2.0 * cplx(b, -2.0) / (b + s), 1.0 / 3.0) *
                   hyp2f1(cplx(1.0 / 3), cplx(1.0 / 3), 1.0, (b - s) / (b + s));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("degree-2 signature-3 modular pair") {
    double a = 0.5, b = 0.5 + 5.0 * std::sqrt(3.0) / 18.0;
    double lhs = std::cbrt(a * b) + std::cbrt((1.0 - a) * (1.0 - b));
    CHECK(std::abs(lhs - 1.0) < 1e-12);
}

TEST_CASE("elliptic K") {
    CHECK(std::abs(elliptic_K(0.0) - kPi / 2.0) < 1e-15);
    // quadrature oracle at k = 0.5
    CHECK(std::abs(elliptic_K(0.5) - K_quadrature(0.5)) < 1e-12);
    // the closed-form tetrahedral modulus value
    double k = (std::sqrt(3.0) - 1.0) / (2.0 * std::sqrt(2.0));
    double want = (gamma_c(1.0 / 6.0) * gamma_c(1.0 / 3.0)).real() /
                  (std::pow(3.0, 0.25) * 4.0 * std::sqrt(kPi));
    CHECK(std::abs(elliptic_K(k) - want) < 1e-12);
    CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
}

TEST_CASE("jacobi elliptic functions") {
    auto v0 = jacobi_sn_cn_dn(0.0, 0.7);
    CHECK(std::abs(v0.sn) < 1e-15);
    CHECK(std::abs(v0.cn - 1.0) < 1e-15);
    CHECK(std::abs(v0.dn - 1.0) < 1e-15);
    // quarter period
    double k = 0.7, kp = std::sqrt(1.0 - k * k);
    auto vK = jacobi_sn_cn_dn(elliptic_K(k), k);
    CHECK(std::abs(vK.sn - 1.0) < 1e-12);
    CHECK(std::abs(vK.cn) < 1e-12);
    CHECK(std::abs(vK.dn - kp) < 1e-12);
    // pythagorean identities on a sweep
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        double u = (double(rng() % 4000) / 1000.0) - 2.0;
        double kk = double(rng() % 900) / 1000.0;
        auto v = jacobi_sn_cn_dn(u, kk);
        CHECK(std::abs(v.sn * v.sn + v.cn * v.cn - 1.0) < 1e-12);
        CHECK(std::abs(v.dn * v.dn + kk * kk * v.sn * v.sn - 1.0) < 1e-12);
    }
}

#include "monoct/special.hpp"

#include <cmath>
#include <vector>

namespace monoct {

namespace {

bool near_nonpositive_int(cplx z, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol) return false;
    double r = z.real();
    if (r > 0.5) return false;
    return std::abs(r - std::round(r)) < tol;
}

// Lanczos, g = 7, n = 9 (Godfrey/Pugh coefficients)
const double lanczos_g = 7.0;
const std::array<double, 9> lanczos_c = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

cplx gamma_lanczos(cplx z) {
    // valid for Re z > 0.5
    z -= 1.0;
    cplx x = lanczos_c[0];
    for (int i = 1; i < 9; ++i) x += lanczos_c[i] / (z + cplx(i, 0));
    cplx t = z + lanczos_g + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

bool is_int(cplx z, double tol = 1e-11) {
    return std::abs(z.imag()) < tol && std::abs(z.real() - std::round(z.real())) < tol;
}

// direct Gauss series, |z| < 1
cplx hyp_series(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg) {
    cplx term = 1.0, sum = 1.0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        term *= (a + cplx(n)) * (b + cplx(n)) / ((c + cplx(n)) * cplx(n + 1)) * z;
        sum += term;
        if (n > 4 && std::abs(term) < 0.5 * (cfg.abs_tol + std::abs(sum) * cfg.rel_tol))
            return sum;
    }
    throw ConvergenceError("hyp2f1: series did not converge");
}

cplx hyp_core(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg, int depth);

// connection at z = 1, c - a - b not an integer
cplx hyp_near_one(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg, int depth) {
    cplx s = c - a - b;
    cplx w = 1.0 - z;
    cplx t1 = gamma_c(c) * gamma_c(s) / (gamma_c(c - a) * gamma_c(c - b)) *
              hyp_core(a, b, 1.0 - s, w, cfg, depth + 1);
    cplx t2 = std::pow(w, s) * gamma_c(c) * gamma_c(-s) / (gamma_c(a) * gamma_c(b)) *
              hyp_core(c - a, c - b, 1.0 + s, w, cfg, depth + 1);
    return t1 + t2;
}

// logarithmic connection for c = a + b (the integer case met in this family)
cplx hyp_near_one_log(cplx a, cplx b, cplx z, const ToleranceConfig& cfg) {
    cplx w = 1.0 - z;
    cplx lw = std::log(w);
    cplx pref = gamma_c(a + b) / (gamma_c(a) * gamma_c(b));
    cplx sum = 0.0, term = 1.0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        cplx psi = 2.0 * digamma_c(cplx(n + 1)) - digamma_c(a + cplx(n)) - digamma_c(b + cplx(n));
        cplx add = term * (psi - lw);
        sum += add;
        if (n > 4 && std::abs(add) < 0.5 * (cfg.abs_tol + std::abs(sum) * cfg.rel_tol))
            return pref * sum;
        term *= (a + cplx(n)) * (b + cplx(n)) / (cplx(n + 1) * cplx(n + 1)) * w;
    }
    throw ConvergenceError("hyp2f1: logarithmic series did not converge");
}

// Taylor recentering along a path avoiding [1,inf); f analytic there.
// Recurrence at z0 (A = z0(1-z0)):
//   A (n+2)(n+1) u_{n+2} = [n(2z0-1) + (a+b+1)z0 - c](n+1) u_{n+1} + (n+a)(n+b) u_n
cplx hyp_continue(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg) {
    std::vector<cplx> path;
    path.push_back(cplx(0.0, 0.0));
    if (z.real() > 0.6 && std::abs(z.imag()) < 0.8) {
        double s = (z.imag() >= 0.0) ? 1.0 : -1.0;
        path.push_back(cplx(0.4, s * 0.9));
        path.push_back(cplx(z.real(), s * 0.9));
    }
    path.push_back(z);

    // seed away from the regular singular point z = 0 with the direct series
    cplx z0 = 0.0, f = 1.0, fp = a * b / c;
    {
        cplx dir = (path[1] == cplx(0.0)) ? z : path[1];
        cplx zs = 0.45 * dir / std::abs(dir);
        f = hyp_series(a, b, c, zs, cfg);
        fp = a * b / c * hyp_series(a + 1.0, b + 1.0, c + 1.0, zs, cfg);
        z0 = zs;
    }
    const int N = 64;
    std::vector<cplx> u(N + 2);
    auto step_to = [&](cplx z1) {
        cplx h = z1 - z0;
        u[0] = f;
        u[1] = fp;
        cplx A = z0 * (1.0 - z0);
        for (int n = 0; n <= N - 1; ++n) {
            cplx t1 = (cplx(n) * (2.0 * z0 - 1.0) + (a + b + 1.0) * z0 - c) * cplx(n + 1) * u[n + 1];
            cplx t2 = (cplx(n) + a) * (cplx(n) + b) * u[n];
            u[n + 2] = (t1 + t2) / (A * cplx((n + 2) * (n + 1)));
        }
        cplx val = 0.0, dval = 0.0, hp = 1.0;
        for (int k = 0; k <= N; ++k) {
            val += u[k] * hp;
            dval += u[k + 1] * cplx(k + 1) * hp;
            hp *= h;
        }
        f = val;
        fp = dval;
        z0 = z1;
    };
    // step limit: distance to both regular singular points (the recurrence
    // admits the second, singular-at-0 solution; steps past |z0| contaminate)
    auto dist_sing = [](cplx w) {
        double d0 = std::abs(w);
        double d1 = std::abs(w - cplx(1.0));
        double dcut = (w.real() >= 1.0) ? std::abs(w.imag()) : d1;
        return std::min({d0, d1, dcut});
    };
    for (size_t i = 1; i < path.size(); ++i) {
        cplx target = path[i];
        for (int guard = 0;; ++guard) {
            if (guard > 600) throw ConvergenceError("hyp2f1: continuation stuck");
            cplx d = target - z0;
            double r = 0.62 * dist_sing(z0);
            if (r <= 1e-8) throw ConvergenceError("hyp2f1: continuation path touches z = 1");
            if (std::abs(d) <= r) {
                step_to(target);
                break;
            }
            step_to(z0 + d / std::abs(d) * r);
        }
    }
    return f;
}

cplx hyp_core(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg, int depth) {
    if (depth > 4) throw ConvergenceError("hyp2f1: transformation recursion too deep");
    if (near_nonpositive_int(c)) throw DomainError("hyp2f1: c is a non-positive integer");
    if (std::abs(z) < 1e-300) return 1.0;
    if (near_nonpositive_int(a) || near_nonpositive_int(b))
        return hyp_series(a, b, c, z, cfg); // terminating
    if (std::abs(z) <= 0.6) return hyp_series(a, b, c, z, cfg);
    cplx zp = z / (z - 1.0);
    if (std::abs(zp) <= 0.6)
        return std::pow(1.0 - z, -a) * hyp_series(a, c - b, c, zp, cfg);
    bool on_cut = z.real() >= 1.0 && std::abs(z.imag()) < 1e-14;
    if (on_cut)
        throw DomainError("hyp2f1: z on the branch cut [1,inf)");
    if (std::abs(1.0 - z) <= 0.6) {
        cplx s = c - a - b;
        if (!is_int(s)) return hyp_near_one(a, b, c, z, cfg, depth);
        if (std::abs(s) < 1e-11) return hyp_near_one_log(a, b, z, cfg);
    }
    return hyp_continue(a, b, c, z, cfg);
}

} // namespace

cplx gamma_c(cplx z) {
    if (near_nonpositive_int(z)) throw DomainError("gamma: pole at non-positive integer");
    if (z.real() < 0.5)
        return kPi / (std::sin(kPi * z) * gamma_lanczos(1.0 - z));
    return gamma_lanczos(z);
}

double log_gamma_real(double x) { return std::lgamma(x); }

cplx digamma_c(cplx z) {
    cplx s = 0.0;
    while (z.real() < 8.0) {
        s -= 1.0 / z;
        z += 1.0;
    }
    cplx inv = 1.0 / z, inv2 = inv * inv;
    cplx r = std::log(z) - 0.5 * inv;
    const double B[] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
                        1.0 / 132, -691.0 / 32760, 1.0 / 12};
    cplx p = inv2;
    for (double bn : B) {
        r -= bn * p;
        p *= inv2;
    }
    return s + r;
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg) {
    return hyp_core(a, b, c, z, cfg, 0);
}

double elliptic_K(double k) {
    if (k < 0.0 || k >= 1.0) throw DomainError("elliptic_K: modulus must satisfy 0 <= k < 1");
    double a = 1.0, g = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 64 && std::abs(a - g) > 1e-16 * a; ++i) {
        double an = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = an;
    }
    return kPi / (2.0 * a);
}

JacobiSCD jacobi_sn_cn_dn(double u, double k) {
    if (k < 0.0 || k >= 1.0) throw DomainError("jacobi: modulus must satisfy 0 <= k < 1");
    if (k < 1e-14) return {std::sin(u), std::cos(u), 1.0};
    std::array<double, 64> a{}, g{}, cc{};
    a[0] = 1.0;
    g[0] = std::sqrt(1.0 - k * k);
    cc[0] = k;
    int n = 0;
    while (n < 60 && std::abs(cc[n]) > 1e-17 * a[n]) {
        a[n + 1] = 0.5 * (a[n] + g[n]);
        cc[n + 1] = 0.5 * (a[n] - g[n]);
        g[n + 1] = std::sqrt(a[n] * g[n]);
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i > 0; --i)
        phi = 0.5 * (phi + std::asin(std::clamp(cc[i] / a[i] * std::sin(phi), -1.0, 1.0)));
    double sn = std::sin(phi), cn = std::cos(phi);
    double dn = std::sqrt(1.0 - k * k * sn * sn);
    return {sn, cn, dn};
}

} // namespace monoct

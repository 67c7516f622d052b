#include "monoct/es.hpp"

#include <cmath>
#include <numeric>

namespace monoct {

namespace {
const cplx kRho = cube_root_unity();
}

bool admissible(long long n1, long long m1) {
    long long g = std::gcd(std::llabs(n1), std::llabs(m1));
    if (g != 1) return false;
    return (m1 + n1) * (m1 - 2 * n1) < 0;
}

std::pair<IVec, IVec> extend_vectors(long long n1, long long m1) {
    IVec n(4), m(4);
    n << n1, m1 - n1, -m1, 2 * n1 - m1;
    m << m1, -n1, n1 - m1, -3 * n1;
    return {n, m};
}

double es_ratio(double t, const ToleranceConfig& cfg) {
    cplx a(1.0 / 3.0), b(2.0 / 3.0);
    cplx num = hyp2f1(a, b, 1.0, t, cfg);
    cplx den = hyp2f1(a, b, 1.0, 1.0 - t, cfg);
    return num.real() / den.real();
}

double solve_t(long long n1, long long m1, const ToleranceConfig& cfg) {
    double target = double(2 * n1 - m1) / double(m1 + n1);
    if (!(target > 0.0)) throw DomainError("solve_t: inadmissible ratio");
    // f is strictly increasing from 0 to infinity on (0,1)
    double lo = 1e-9, hi = 1.0 - 1e-9;
    auto f = [&](double t) { return es_ratio(t, cfg) - target; };
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) throw NumericError("solve_t: bracket failure");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm <= 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    double t = 0.5 * (lo + hi);
    // Newton polish with numerical derivative
    for (int it = 0; it < 4; ++it) {
        double h = 1e-7 * std::max(0.01, std::min(t, 1.0 - t));
        double d = (f(t + h) - f(t - h)) / (2.0 * h);
        if (std::abs(d) < 1e-14) break;
        double step = f(t) / d;
        double tn = t - step;
        if (tn <= 0.0 || tn >= 1.0) break;
        t = tn;
    }
    return t;
}

std::optional<double> ramanujan_t(long long n1, long long m1) {
    if (m1 + n1 == 0) return std::nullopt;
    double target = double(2 * n1 - m1) / double(m1 + n1);
    const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
    auto close = [&](double v) { return std::abs(target - v) < 1e-12; };
    if (close(1.0)) return 0.5;
    if (close(2.0)) return 0.5 + 5.0 * s3 / 18.0;
    if (close(0.5)) return 0.5 - 5.0 * s3 / 18.0;
    if (close(3.0)) {
        double c2 = std::cbrt(2.0), c4 = std::cbrt(4.0);
        return (63.0 + 171.0 * c2 - 18.0 * c4) / 250.0;
    }
    if (close(1.0 / 3.0)) {
        double c2 = std::cbrt(2.0), c4 = std::cbrt(4.0);
        return 1.0 - (63.0 + 171.0 * c2 - 18.0 * c4) / 250.0;
    }
    if (close(4.0)) return 0.5 + (153.0 * s3 - 99.0 * s2) / 250.0;
    if (close(0.25)) return 0.5 - (153.0 * s3 - 99.0 * s2) / 250.0;
    return std::nullopt;
}

ESData curve_from_t(long long n1, long long m1, double t, const ToleranceConfig& cfg) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("curve_from_t: t must lie in (0,1)");
    ESData es;
    es.n1 = n1;
    es.m1 = m1;
    std::tie(es.n, es.m) = extend_vectors(n1, m1);
    es.d = 2 * (n1 + m1) * (m1 - 2 * n1);
    es.t = t;
    es.b = (1.0 - 2.0 * t) / std::sqrt(t * (1.0 - t));
    es.alpha = std::pow(t / (1.0 - t), 1.0 / 6.0);
    double a6 = std::pow(es.alpha, 6.0);
    double F = hyp2f1(cplx(1.0 / 3.0), cplx(2.0 / 3.0), 1.0, t, cfg).real();
    es.chi_cuberoot = -double(n1 + m1) * (2.0 * kPi / (3.0 * std::sqrt(3.0))) * es.alpha /
                      std::cbrt(1.0 + a6) * F;
    es.chi = std::pow(es.chi_cuberoot, 3.0);
    es.xi = 3.0 * es.chi_cuberoot / (double(n1 + m1) * double(m1 - 2 * n1));
    return es;
}

ESData solve_es(long long n1, long long m1, const ToleranceConfig& cfg) {
    if (!admissible(n1, m1)) throw DomainError("solve_es: inadmissible winding pair");
    return curve_from_t(n1, m1, solve_t(n1, m1, cfg), cfg);
}

ESResidual verify_es(const PeriodData& pd, const ESData& es) {
    CVec nc(4), mc(4);
    for (int i = 0; i < 4; ++i) {
        nc[i] = double(es.n[i]);
        mc[i] = double(es.m[i]);
    }
    CVec lhs = pd.A.transpose() * nc + pd.B.transpose() * mc;
    CVec rhs = CVec::Zero(4);
    rhs[0] = 6.0 * es.chi_cuberoot;
    ESResidual out;
    out.constraint = (lhs - rhs).cwiseAbs().maxCoeff();
    RMat H = hmat4();
    CVec xexp(4);
    for (int i = 0; i < 4; ++i)
        xexp[i] = es.xi * (H(i, i) * nc[i] + kRho * kRho * mc[i]);
    out.x_form = (pd.x - xexp).cwiseAbs().maxCoeff();
    return out;
}

} // namespace monoct

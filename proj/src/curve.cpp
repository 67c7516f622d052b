#include "monoct/curve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace monoct {

namespace {

const cplx kRho = cube_root_unity();

// 16-point Gauss-Legendre nodes/weights on [-1,1]
const double kGLx[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double kGLw[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

cplx nearest_cube_root(cplx f, cplx seed) {
    cplx r = std::pow(f, 1.0 / 3.0);
    cplx best = r;
    double bd = std::abs(r - seed);
    for (cplx cand : {r * kRho, r * kRho * kRho}) {
        double d = std::abs(cand - seed);
        if (d < bd) {
            bd = d;
            best = cand;
        }
    }
    return best;
}

struct FourForm {
    // integrand vector (dz/w, dz/w^2, z dz/w^2, z^2 dz/w^2) / dz
    static CVec eval(cplx z, cplx w) {
        CVec v(4);
        v[0] = 1.0 / w;
        v[1] = 1.0 / (w * w);
        v[2] = z / (w * w);
        v[3] = z * z / (w * w);
        return v;
    }
};

} // namespace

SymmetricCurve SymmetricCurve::from_b(double b) {
    SymmetricCurve c;
    c.b = b;
    c.alpha = std::cbrt((-b + std::sqrt(b * b + 4.0)) / 2.0);
    c.beta = -1.0 / c.alpha;
    return c;
}

std::array<cplx, 6> SymmetricCurve::branch_points() const {
    cplx r = kRho, r2 = kRho * kRho;
    return {cplx(alpha), r2 * cplx(beta), r * cplx(alpha),
            cplx(beta),  r2 * cplx(alpha), r * cplx(beta)};
}

GeneralSextic GeneralSextic::from_symmetric(const SymmetricCurve& c) {
    GeneralSextic s;
    s.lambda = c.branch_points();
    s.z_ref = 0.0;
    s.w_ref = -1.0; // w real negative between -1/alpha and alpha on sheet 1
    return s;
}

cplx GeneralSextic::poly(cplx z) const {
    cplx p = 1.0;
    for (const cplx& l : lambda) p *= (z - l);
    return p;
}

// ---------------------------------------------------------------------------
// closed-form periods of the symmetric family
// ---------------------------------------------------------------------------
PeriodData periods_symmetric(double b, const ToleranceConfig& cfg) {
    SymmetricCurve sc = SymmetricCurve::from_b(b);
    double al = sc.alpha;
    double a6 = std::pow(al, 6.0);
    cplx r = kRho;
    const cplx third(1.0 / 3.0), two_thirds(2.0 / 3.0), five_thirds(5.0 / 3.0);
    double pref = 2.0 * kPi / (3.0 * std::sqrt(3.0));

    PeriodData pd;
    pd.b = b;
    pd.alpha = al;
    pd.I[0] = -pref * al * hyp2f1(third, third, 1.0, -a6, cfg);
    pd.J[0] = pref / al * hyp2f1(third, third, 1.0, -1.0 / a6, cfg);
    double g23 = std::tgamma(2.0 / 3.0);
    pd.I[1] = (4.0 * kPi * kPi / 9.0) / (g23 * g23 * g23) * al / std::cbrt(1.0 + a6);
    pd.J[1] = -pd.I[1];
    pd.I[2] = pref * al * al * hyp2f1(two_thirds, two_thirds, 1.0, -a6, cfg);
    pd.J[2] = pref / (al * al) * hyp2f1(two_thirds, two_thirds, 1.0, -1.0 / a6, cfg);
    pd.I[3] = std::pow(al, 3.0) * hyp2f1(two_thirds, 1.0, cplx(4.0 / 3.0), -a6, cfg);
    pd.J[3] = -std::pow(al, -3.0) * hyp2f1(two_thirds, 1.0, cplx(4.0 / 3.0), -1.0 / a6, cfg);
    double kl_pref = 4.0 * std::sqrt(3.0) * kPi / 27.0;
    pd.K1 = -kl_pref * std::pow(al, 5.0) * hyp2f1(two_thirds, five_thirds, 2.0, -a6, cfg);
    pd.L1 = kl_pref * std::pow(al, -5.0) * hyp2f1(two_thirds, five_thirds, 2.0, -1.0 / a6, cfg);

    cplx I1 = pd.I[0], J1 = pd.J[0], I2 = pd.I[1], J3 = pd.J[2];
    cplx R = I1 / J1;

    auto fill = [&](CMat& M, const std::array<std::array<cplx, 4>, 4>& rows) {
        M.resize(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) M(i, j) = rows[i][j];
    };
    CMat MA, MB;
    fill(MA, {{{-1.0 - 2.0 * r - (2.0 + r) * R, 1.0 + 2.0 * r, 1.0 + 2.0 * r + (1.0 - r) * R, -1.0 + r},
               {2.0 + r + (1.0 - r) * R, -2.0 - r, 1.0 - r - (2.0 + r) * R, -1.0 + r},
               {-1.0 + r + (1.0 + 2.0 * r) * R, 1.0 - r, -2.0 - r + (1.0 + 2.0 * r) * R, -1.0 + r},
               {3.0 + 3.0 * r - 3.0 * r * R, 0.0, -3.0 * r - 3.0 * (1.0 + r) * R, 0.0}}});
    fill(MB, {{{2.0 + r + (1.0 - r) * R, 1.0 - r, 1.0 - r - (2.0 + r) * R, 2.0 + r},
               {-1.0 + r + (1.0 + 2.0 * r) * R, 1.0 + 2.0 * r, -2.0 - r + (1.0 + 2.0 * r) * R, 2.0 + r},
               {-1.0 - 2.0 * r - (2.0 + r) * R, -2.0 - r, 1.0 + 2.0 * r + (1.0 - r) * R, 2.0 + r},
               {3.0 - 3.0 * (1.0 + r) * R, 0.0, 3.0 - 3.0 * r * R, 0.0}}});
    CMat D = CMat::Zero(4, 4);
    D(0, 0) = J1;
    D(1, 1) = I2;
    D(2, 2) = J3;
    D(3, 3) = I2;
    pd.A = MA * D;
    pd.B = MB * D;
    pd.x = pd.A.col(0);
    pd.b_vec = pd.A.col(1);
    pd.c_vec = pd.A.col(2);
    pd.d_vec = pd.A.col(3);

    // a-periods of dr_1 = z^4 dz / (3 w^2); the hypergeometric tail values
    // K1, L1 equal the corresponding second-kind integrals, and the dr_1
    // period vector carries an extra factor 1/3 (fixed by the Legendre
    // relation y.Hx = -2 pi / sqrt(3)).
    cplx K1 = pd.K1, L1 = pd.L1;
    pd.y.resize(4);
    pd.y[0] = (K1 + 2.0 * L1) * r - K1 + L1;
    pd.y[1] = (K1 - L1) * r + 2.0 * K1 + L1;
    pd.y[2] = -(2.0 * K1 + L1) * r - K1 - 2.0 * L1;
    pd.y[3] = 3.0 * (K1 - L1) * r + 3.0 * K1;
    pd.y /= 3.0;

    pd.tau_a.tau = pd.A * pd.B.inverse();
    pd.tau_a.tau = 0.5 * (pd.tau_a.tau + pd.tau_a.tau.transpose()).eval();
    pd.tau_b.tau = pd.B * pd.A.inverse();
    pd.tau_b.tau = 0.5 * (pd.tau_b.tau + pd.tau_b.tau.transpose()).eval();

    RMat H = hmat4();
    pd.Delta = pd.x.transpose() * H.cast<cplx>() * pd.x;
    return pd;
}

PeriodMatrixTau period_matrix_from_x(const CVec& x) {
    RMat H = hmat4();
    cplx xHx = x.transpose() * H.cast<cplx>() * x;
    if (std::abs(xHx) < 1e-14) throw DomainError("period_matrix_from_x: x^T H x = 0");
    cplx xbarHx = x.conjugate().transpose() * H.cast<cplx>() * x;
    if (xbarHx.real() >= 0.0)
        throw DomainError("period_matrix_from_x: reality condition conj(x)^T H x < 0 violated");
    cplx r = kRho;
    CMat tau = r * (H.cast<cplx>() - (1.0 - r) * (x * x.transpose()) / xHx);
    PeriodMatrixTau t;
    t.tau = 0.5 * (tau + tau.transpose()).eval();
    t.check_conditioning();
    return t;
}

// ---------------------------------------------------------------------------
// quadrature along straight segments with cube-root endpoint regularization
// ---------------------------------------------------------------------------
namespace {

struct Tracker {
    const GeneralSextic* curve;
    cplx w;
    void seed(cplx z0, cplx w0) { w = nearest_cube_root(curve->poly(z0), w0); }
    cplx at(cplx z) {
        w = nearest_cube_root(curve->poly(z), w);
        return w;
    }
};

bool is_branch(const GeneralSextic& c, cplx z) {
    for (const cplx& l : c.lambda)
        if (std::abs(z - l) < 1e-12) return true;
    return false;
}

// integrate the four forms over z(t), t in [0,1], possibly with the cube-root
// substitution at either end; panels doubled until convergence
CVec integrate_param(const GeneralSextic& curve, const std::function<cplx(double)>& zfun,
                     const std::function<cplx(double)>& dzfun, cplx wseed, int panels0,
                     const ToleranceConfig& cfg) {
    CVec prev = CVec::Zero(4);
    for (int panels = panels0; panels <= (1 << 14); panels *= 2) {
        Tracker trk{&curve, wseed};
        trk.seed(zfun(1e-14), wseed);
        CVec acc = CVec::Zero(4);
        for (int p = 0; p < panels; ++p) {
            double t0 = double(p) / panels, t1 = double(p + 1) / panels;
            double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
            for (int q = 0; q < 16; ++q) {
                double t = mid + half * kGLx[q];
                cplx z = zfun(t);
                cplx w = trk.at(z);
                acc += (kGLw[q] * half) * FourForm::eval(z, w) * dzfun(t);
            }
        }
        if (panels > panels0 && (acc - prev).cwiseAbs().maxCoeff() <
                                    std::max(cfg.abs_tol * 10.0, 1e-13 * acc.cwiseAbs().maxCoeff()))
            return acc;
        prev = acc;
    }
    return prev;
}

} // namespace

CVec quad_segment(const GeneralSextic& curve, cplx z0, cplx z1, cplx w0,
                  const ToleranceConfig& cfg) {
    bool b0 = is_branch(curve, z0), b1 = is_branch(curve, z1);
    cplx d = z1 - z0;
    // map t in [0,1] to z with s^3 clustering at branch endpoints
    auto zfun = [=](double t) -> cplx {
        double u = t;
        if (b0 && b1) {
            // symmetric cubic smoothing: u = 3t^2-2t^3 has zero derivative at
            // both ends but only quadratic clustering; use per-half cubics
            if (t < 0.5)
                u = 4.0 * t * t * t;
            else
                u = 1.0 - 4.0 * (1.0 - t) * (1.0 - t) * (1.0 - t);
        } else if (b0) {
            u = t * t * t;
        } else if (b1) {
            u = 1.0 - (1.0 - t) * (1.0 - t) * (1.0 - t);
        }
        return z0 + u * d;
    };
    auto dzfun = [=](double t) -> cplx {
        double du = 1.0;
        if (b0 && b1) {
            du = (t < 0.5) ? 12.0 * t * t : 12.0 * (1.0 - t) * (1.0 - t);
        } else if (b0) {
            du = 3.0 * t * t;
        } else if (b1) {
            du = 3.0 * (1.0 - t) * (1.0 - t);
        }
        return d * du;
    };
    // seed w near the start (just inside the segment)
    return integrate_param(curve, zfun, dzfun, w0, 8, cfg);
}

CVec quad_period(const GeneralSextic& curve, int from_bp, int to_bp, int sheet,
                 const ToleranceConfig& cfg) {
    if (from_bp < 1 || from_bp > 6 || to_bp < 1 || to_bp > 6 || from_bp == to_bp)
        throw DomainError("quad_period: branch indices must be distinct in 1..6");
    if (sheet < 1 || sheet > 3) throw DomainError("quad_period: sheet must be 1..3");
    cplx za = curve.lambda[from_bp - 1], zb = curve.lambda[to_bp - 1];
    // path safety: stay clear of the other branch points
    cplx mid = 0.5 * (za + zb);
    for (int i = 0; i < 6; ++i) {
        if (i == from_bp - 1 || i == to_bp - 1) continue;
        cplx l = curve.lambda[i];
        // distance from l to segment
        cplx d = zb - za;
        double t = std::clamp(((l - za) / d).real(), 0.0, 1.0);
        if (std::abs(za + t * d - l) < 1e-6)
            throw DomainError("quad_period: segment passes through another branch point");
    }
    // sheet seed: continue w from the reference point to the segment midpoint
    cplx wref = curve.w_ref * std::pow(kRho, sheet - 1);
    Tracker trk{&curve, wref};
    trk.seed(curve.z_ref, wref);
    int steps = 600;
    for (int s = 1; s <= steps; ++s) {
        cplx z = curve.z_ref + (mid - curve.z_ref) * (double(s) / steps);
        trk.at(z);
    }
    cplx wmid = trk.w;
    // integrate mid -> za backwards and mid -> zb forwards
    CVec first = quad_segment(curve, mid, za, wmid, cfg);
    CVec second = quad_segment(curve, mid, zb, wmid, cfg);
    return second - first;
}

// ---------------------------------------------------------------------------
// branch integrals as period combinations
// ---------------------------------------------------------------------------
namespace {

// periods of the four differentials over a_k / b_k as rows of A and B
CVec cycle_combo(const PeriodData& pd, const RVec& acoef, const RVec& bcoef) {
    CVec out = CVec::Zero(4);
    for (int k = 0; k < 4; ++k)
        out += acoef[k] * pd.A.row(k).transpose() + bcoef[k] * pd.B.row(k).transpose();
    return out;
}

RVec unit4(int k, double v = 1.0) {
    RVec u = RVec::Zero(4);
    u[k] = v;
    return u;
}

} // namespace

BranchIntegral branch_integral(int i, int j, int sheet, const PeriodData& pd) {
    if (i == j) throw DomainError("branch_integral: need distinct branch points");
    if (sheet < 1 || sheet > 3) throw DomainError("branch_integral: sheet must be 1..3");
    // canonical adjacent pairs: (1,2) -> k=1, (3,4) -> k=2, (5,6) -> k=3
    auto adjacent = [&](int a, int b) -> int {
        if (a == 1 && b == 2) return 1;
        if (a == 3 && b == 4) return 2;
        if (a == 5 && b == 6) return 3;
        return 0;
    };
    bool flip = false;
    int a = i, b = j;
    if (!adjacent(a, b) && adjacent(j, i)) {
        a = j;
        b = i;
        flip = true;
    }
    if (int k = adjacent(a, b); k != 0) {
        // gamma_1 = (1/3)(a_k - b_k), gamma_2 = (1/3)(-2a_k - b_k), gamma_3 = (1/3)(a_k + 2 b_k)
        RVec ac = RVec::Zero(4), bc = RVec::Zero(4);
        if (sheet == 1) {
            ac[k - 1] = 1.0 / 3.0;
            bc[k - 1] = -1.0 / 3.0;
        } else if (sheet == 2) {
            ac[k - 1] = -2.0 / 3.0;
            bc[k - 1] = -1.0 / 3.0;
        } else {
            ac[k - 1] = 1.0 / 3.0;
            bc[k - 1] = 2.0 / 3.0;
        }
        CVec v = cycle_combo(pd, ac, bc);
        if (flip) v = -v;
        return {v, false};
    }
    // (1,6): gamma_1 = (1/3)(2a_3 - 2b_1 - a_1 + b_3 + a_4 + b_4)
    auto pair16 = [&](int sh) -> CVec {
        RVec ac = RVec::Zero(4), bc = RVec::Zero(4);
        ac[2] += 2.0 / 3.0;
        bc[0] += -2.0 / 3.0;
        ac[0] += -1.0 / 3.0;
        bc[2] += 1.0 / 3.0;
        ac[3] += 1.0 / 3.0;
        bc[3] += 1.0 / 3.0;
        CVec g1 = cycle_combo(pd, ac, bc);
        if (sh == 1) return g1;
        // gamma_1 - gamma_2 = a_4 - b_1 + b_3 + a_3 ; gamma_1 - gamma_3 = b_4 - a_1 - b_1 + a_3
        if (sh == 2) {
            CVec d = cycle_combo(pd, unit4(3) + unit4(2), unit4(0, -1.0) + unit4(2));
            return g1 - d;
        }
        CVec d = cycle_combo(pd, unit4(0, -1.0) + unit4(2), unit4(3) + unit4(0, -1.0));
        return g1 - d;
    };
    if ((i == 1 && j == 6) || (i == 6 && j == 1)) {
        CVec v = pair16(sheet);
        if (i == 6) v = -v;
        return {v, false};
    }
    // (4,5) via the mod-lattice reduction:
    //   gamma_1(4,5) = gamma_1(3,4) - gamma_1(1,2) - gamma_1(1,6)   (mod lattice)
    if ((i == 4 && j == 5) || (i == 5 && j == 4)) {
        CVec v = branch_integral(3, 4, sheet, pd).value - branch_integral(1, 2, sheet, pd).value -
                 pair16(sheet);
        if (i == 5) v = -v;
        return {v, true};
    }
    // chain along the connected path 2-1-6-5-4-3 (mod lattice)
    static const int order[] = {2, 1, 6, 5, 4, 3};
    auto pos = [&](int v) {
        for (int t = 0; t < 6; ++t)
            if (order[t] == v) return t;
        return -1;
    };
    int pi = pos(i), pj = pos(j);
    if (pi < 0 || pj < 0) throw DomainError("branch_integral: unsupported pair");
    CVec acc = CVec::Zero(4);
    bool mod_lat = false;
    int step = (pj > pi) ? 1 : -1;
    for (int t = pi; t != pj; t += step) {
        int u = order[t], v = order[t + step];
        BranchIntegral leg = branch_integral(u, v, sheet, pd);
        acc += leg.value;
        mod_lat = mod_lat || leg.mod_lattice || true; // chained values live mod lattice
    }
    return {acc, true};
}

std::array<CVec, 3> abel_infinities(const PeriodData& pd) {
    cplx r = kRho, r2 = kRho * kRho;
    auto mk = [&](cplx f1, cplx f2) {
        CVec v(4);
        v[0] = f1 * pd.J[0];
        v[1] = -f2 * pd.J[3];
        v[2] = f2 * pd.J[2];
        v[3] = -f2 * pd.J[1];
        return v;
    };
    CVec q12 = mk(r - 1.0, r2 - 1.0);
    CVec q13 = mk(r2 - 1.0, r - 1.0);
    CVec q23 = q13 - q12;
    return {q12, q13, q23};
}

// ---------------------------------------------------------------------------
// ray-based Abel family (base point 0_1 = (0, -1))
// ---------------------------------------------------------------------------
namespace {

// integral of the four du along the ray arg = 30 deg from 0 to infinity on
// the sheet seeded by w(0) = -1, with analytic tails; returns du-integrals
CVec ray30_integral(const GeneralSextic& curve, double bpar, const ToleranceConfig& cfg) {
    const double theta = kPi / 6.0;
    const cplx dir(std::cos(theta), std::sin(theta));
    const double R = 1.0e4;
    // panels: [0,2] uniform-ish then geometric to R
    std::vector<double> knots;
    for (double t = 0.0; t < 2.0; t += 0.25) knots.push_back(t);
    double t = 2.0;
    while (t < R) {
        knots.push_back(t);
        t *= 1.6;
    }
    knots.push_back(R);

    Tracker trk{&curve, -1.0};
    trk.seed(1e-12 * dir, -1.0);
    CVec acc = CVec::Zero(4);
    for (size_t p = 0; p + 1 < knots.size(); ++p) {
        // refine each knot interval with doubling
        double a = knots[p], b2 = knots[p + 1];
        CVec prev = CVec::Zero(4);
        cplx wknot = trk.w;
        for (int sub = 4; sub <= 512; sub *= 2) {
            Tracker local{&curve, wknot};
            local.seed(a == 0.0 ? 1e-12 * dir : a * dir, wknot);
            CVec part = CVec::Zero(4);
            for (int s = 0; s < sub; ++s) {
                double u0 = a + (b2 - a) * double(s) / sub;
                double u1 = a + (b2 - a) * double(s + 1) / sub;
                double midp = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
                for (int q = 0; q < 16; ++q) {
                    double u = midp + half * kGLx[q];
                    cplx z = u * dir;
                    cplx w = local.at(z);
                    part += (kGLw[q] * half) * FourForm::eval(z, w) * dir;
                }
            }
            if (sub > 4 && (part - prev).cwiseAbs().maxCoeff() < 1e-13 * (1.0 + part.cwiseAbs().maxCoeff())) {
                prev = part;
                trk.w = local.w;
                break;
            }
            prev = part;
            trk.w = local.w;
        }
        acc += prev;
    }
    // analytic tails at z_R = R * dir with sheet factor e = w/z^2 there
    cplx zR = R * dir;
    cplx e = trk.w / (zR * zR);
    CVec tail(4);
    tail[0] = 1.0 / (e * zR) - bpar / (12.0 * e * std::pow(zR, 4));
    tail[1] = 1.0 / (3.0 * e * e * std::pow(zR, 3)) - bpar / (9.0 * e * e * std::pow(zR, 6));
    tail[2] = 1.0 / (2.0 * e * e * zR * zR) - 2.0 * bpar / (15.0 * e * e * std::pow(zR, 5));
    tail[3] = 1.0 / (e * e * zR) - bpar / (6.0 * e * e * std::pow(zR, 4));
    return acc + tail;
}

CMat diagc(cplx a, cplx b, cplx c, cplx d) {
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

} // namespace

AbelFamily abel_family(const PeriodData& pd, const ToleranceConfig& cfg) {
    SymmetricCurve sc = SymmetricCurve::from_b(pd.b);
    GeneralSextic gs = GeneralSextic::from_symmetric(sc);
    CVec N1 = ray30_integral(gs, pd.b, cfg);
    cplx r = kRho, r2 = kRho * kRho;
    // z -> rho z fixes 0_1 and advances the infinity label; du transforms by
    // diag(rho, rho, rho^2, 1)
    CMat Sb = diagc(r, r, r2, 1.0);
    CVec N2 = Sb * N1;
    CVec N3 = Sb * N2;
    // deck w -> rho w: du transforms by diag(rho^2, rho, rho, rho)
    CMat SR = diagc(r2, r, r, r);
    AbelFamily fam;
    fam.to_infinity = {N1, N2, N3};
    fam.to_zero[0] = CVec::Zero(4);
    fam.to_zero[1] = N1 - SR * N3;                      // 0_1 -> inf_1, then R(inf_3 -> 0_1)
    fam.to_zero[2] = N1 + SR * (fam.to_zero[1] - N3);   // one more deck step
    fam.Binv_t = pd.B.inverse().transpose();
    return fam;
}

// ---------------------------------------------------------------------------
// lattice reduction and Riemann constants
// ---------------------------------------------------------------------------
LatticeReduction reduce_mod_lattice(const CVec& v, const PeriodMatrixTau& tau) {
    int g = tau.genus();
    RMat X = tau.tau.real(), Y = tau.tau.imag();
    RVec q = Y.ldlt().solve(v.imag());
    RVec p = v.real() - X * q;
    LatticeReduction out;
    out.pq.resize(2 * g);
    for (int i = 0; i < g; ++i) {
        out.pq[i] = std::round(p[i]);
        out.pq[g + i] = std::round(q[i]);
    }
    CVec lat(g);
    for (int i = 0; i < g; ++i) {
        lat[i] = out.pq[i];
        for (int j = 0; j < g; ++j) lat[i] += tau.tau(i, j) * out.pq[g + j];
    }
    out.residual = v - lat;
    out.residual_norm = out.residual.cwiseAbs().maxCoeff();
    return out;
}

namespace {

// one oriented leg of a homology cycle: branch point -> 0 -> branch point on one sheet
struct Leg {
    int from, to, sheet; // 1-based branch indices
};

// legs of the normalized cycles (the frame where these cycles give the
// identity periods): ordered loops
std::vector<Leg> norm_cycle_legs(int k) {
    switch (k) {
        case 1: return {{2, 1, 1}, {1, 2, 3}};
        case 2: return {{4, 3, 1}, {3, 4, 3}};
        case 3: return {{6, 5, 1}, {5, 6, 3}};
        case 4: return {{2, 1, 2}, {1, 5, 1}, {5, 6, 2}, {6, 2, 3}};
    }
    throw DomainError("cycle index");
}

} // namespace

RiemannConstants riemann_constants(const PeriodData& pd, const ToleranceConfig& cfg) {
    SymmetricCurve sc = SymmetricCurve::from_b(pd.b);
    GeneralSextic gs = GeneralSextic::from_symmetric(sc);
    const CMat Binv = pd.B.inverse();
    const CMat tau = pd.tau_a.tau;
    const int g = 4;

    // Abel map Phi(P) = B^{-T} int_{Q1}^{P} du with Q1 = (lambda_1, 0);
    // running integration along each cycle; legs go through z = 0 with
    // cube-root clustering at the branch ends.
    auto build_leg_nodes = [&](const Leg& L, int panels) {
        std::vector<std::pair<cplx, cplx>> zdz; // (z, dz/dt scaled by GL weight)
        cplx zf = gs.lambda[L.from - 1], zt = gs.lambda[L.to - 1];
        auto add_half = [&](cplx zb, bool toward_zero) {
            // toward_zero: z = zb (1 - t^3) going zb -> 0 ... but cube clustering
            // must sit at the branch end (t=0 at zb? choose z = zb (1-u), u = t^3)
            for (int p = 0; p < panels; ++p) {
                for (int q = 0; q < 16; ++q) {
                    double t = (p + 0.5 * (1.0 + kGLx[q])) / panels;
                    double u = t * t * t;
                    double du = 3.0 * t * t;
                    cplx z, dz;
                    if (toward_zero) {
                        z = zb * (1.0 - u);
                        dz = -zb * du;
                    } else {
                        z = zb * u;
                        dz = zb * du;
                    }
                    zdz.emplace_back(z, dz * (kGLw[q] * 0.5 / panels) * 2.0);
                }
            }
        };
        // order: from-branch -> 0 (clustered at from), then 0 -> to (clustered at to, reversed)
        // build first half with clustering at zf: t from 1 to 0 visiting zf->0
        std::vector<std::pair<cplx, cplx>> first;
        {
            std::vector<std::pair<cplx, cplx>> tmp;
            add_half(zf, true);
            tmp = zdz;
            zdz.clear();
            // tmp is ordered t increasing = z moving from near zf to 0? u=t^3: t=0 -> z=zf; t=1 -> z=0
            first = tmp; // ordered zf -> 0
        }
        std::vector<std::pair<cplx, cplx>> second;
        {
            std::vector<std::pair<cplx, cplx>> tmp;
            add_half(zt, false);
            tmp = zdz;
            zdz.clear();
            // ordered 0 -> zt? u = t^3: t=0 -> z=0; t=1 -> z=zt
            second = tmp;
        }
        first.insert(first.end(), second.begin(), second.end());
        return first;
    };

    CVec K(g);
    for (int j = 0; j < g; ++j) K[j] = 0.5 * (tau(j, j) + 1.0);

    for (int k = 1; k <= g; ++k) {
        auto legs = norm_cycle_legs(k);
        // running Abel integral (du-space), seeded at the loop start
        // Phi0 = int_{Q1}^{loop start} du along lambda_1 -> 0 -> start on the
        // first leg's sheet... use a fixed simple path: lambda_1 -> 0 on sheet 1,
        // then 0 -> start branch on the first leg's sheet.
        const Leg& L0 = legs.front();
        CVec phi_du = CVec::Zero(4);
        {
            cplx w_s1 = -1.0;
            phi_du -= quad_segment(gs, cplx(0.0), gs.lambda[0], w_s1, cfg); // int_{lambda1}^{0} = -int_0^{lambda1}
            cplx w_sh = -std::pow(kRho, L0.sheet - 1);
            phi_du += quad_segment(gs, cplx(0.0), gs.lambda[L0.from - 1], w_sh, cfg);
        }
        // outer integrals sum_{j} over this cycle of v_k(P) Phi_j(P)
        CVec outer = CVec::Zero(4); // accumulates per differential j the integral with weight v_k
        for (const Leg& L : legs) {
            auto nodes = build_leg_nodes(L, 24);
            cplx w0 = -std::pow(kRho, L.sheet - 1);
            Tracker trk{&gs, w0};
            trk.seed(nodes.front().first, w0);
            // trapezoid-style running accumulation over ordered GL nodes:
            // Phi advances by du * dz at each node (GL weights make this a
            // proper composite integral for both the inner and outer sums)
            for (auto& [z, dzw] : nodes) {
                cplx w = trk.at(z);
                CVec du = FourForm::eval(z, w);
                // midpoint update: add half step before sampling, half after
                CVec half_step = 0.5 * du * dzw;
                phi_du += half_step;
                CVec v = Binv.transpose() * du;   // normalized differentials at P (per dz)
                CVec phi = Binv.transpose() * phi_du;
                outer += v[k - 1] * dzw * phi;
                phi_du += half_step;
            }
        }
        for (int j = 0; j < g; ++j)
            if (j != k - 1) K[j] -= outer[j];
    }

    RiemannConstants rc;
    rc.K = K;
    CVec one = CVec::Ones(4);
    rc.half_period = 0.5 * (one + tau * one);
    LatticeReduction red = reduce_mod_lattice(K - rc.half_period, pd.tau_a);
    rc.lattice_coords = red.pq;
    rc.lattice_residual = red.residual_norm;
    return rc;
}

// ---------------------------------------------------------------------------
// branch-point recovery and reality tests
// ---------------------------------------------------------------------------
RecoveredBranchPoints recover_branch_points(const PeriodMatrixTau& tau,
                                            const ToleranceConfig& cfg) {
    auto th6 = [&](std::array<int, 4> lab) {
        ThetaCharacteristic ch;
        RMat H = hmat4();
        for (int i = 0; i < 4; ++i) ch.a.push_back(Rational(lab[i], 6));
        // b = -a H
        for (int i = 0; i < 4; ++i) ch.b.push_back(Rational(-lab[i] * (long long)std::llround(H(i, i)), 6));
        CVec z0 = CVec::Zero(4);
        return theta(z0, tau, ch, {}, cfg);
    };
    cplx t3335 = th6({3, 3, 3, 5});
    cplx t1133 = th6({1, 1, 3, 3});
    cplx t1533 = th6({1, 5, 3, 3});
    cplx t1155 = th6({1, 1, 5, 5});
    cplx t5111 = th6({5, 1, 1, 1});
    if (std::abs(t1133) < 1e-12 || std::abs(t1155) < 1e-12 || std::abs(t5111) < 1e-12)
        throw NumericError("recover_branch_points: vanishing denominator theta constant");
    auto cube = [](cplx v) { return v * v * v; };
    RecoveredBranchPoints out;
    out.L1 = cube(t3335 / t1133);
    out.L2 = -cube(t1533 / t1155);
    out.L3 = -cube(t1133 / t5111);
    return out;
}

RecoveredBranchPoints normalized_branch_points(const GeneralSextic& curve) {
    const auto& l = curve.lambda;
    auto lam = [&](int idx) { return l[idx - 1]; };
    auto L = [&](int i) {
        int jmap[4] = {0, 1, 3, 4};
        int j = jmap[i];
        return (lam(2) - lam(1)) / (lam(2) - lam(4)) * (lam(2 + j) - lam(4)) / (lam(2 + j) - lam(1));
    };
    return {L(1), L(2), L(3)};
}

MobiusRealityResult mobius_reality_check(cplx L1, cplx L2, cplx L3, double tol) {
    std::array<cplx, 3> L = {L1, L2, L3};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto is_real = [&](cplx v) { return std::abs(v.imag()) <= tol * (1.0 + std::abs(v)); };
    for (auto& p : perms) {
        cplx A = L[p[0]], Bc = L[p[1]], C = L[p[2]];
        if (is_real(A)) {
            double ar = A.real();
            if (ar < 0.0 && std::abs(Bc * std::conj(C) - A) <= tol * (1.0 + std::abs(A)))
                return {true, 'a', {p[0], p[1], p[2]}};
            if (ar > 0.0 && ar < 1.0) {
                cplx lhs = Bc / (Bc - 1.0) * std::conj(C / (C - 1.0));
                cplx rhs = A / (A - 1.0);
                if (std::abs(lhs - rhs) <= tol * (1.0 + std::abs(rhs)))
                    return {true, 'b', {p[0], p[1], p[2]}};
            }
            if (ar > 1.0 &&
                std::abs((1.0 - Bc) * std::conj(1.0 - C) - (1.0 - A)) <= tol * (1.0 + std::abs(A)))
                return {true, 'c', {p[0], p[1], p[2]}};
        } else {
            // case d: all complex
            cplx prod = A * std::conj(Bc);
            if (std::abs(prod.imag()) <= tol * (1.0 + std::abs(prod)) && prod.real() > 0.0) {
                cplx ratio = A / Bc;
                if (std::abs(ratio.imag()) <= tol * (1.0 + std::abs(ratio)) && ratio.real() > 1.0) {
                    cplx c1 = Bc * (1.0 - std::conj(A)) / (1.0 - Bc);
                    cplx c2 = Bc * (1.0 - std::conj(A)) / (1.0 - std::conj(Bc));
                    if (std::abs(C - c1) <= tol * (1.0 + std::abs(C)) ||
                        std::abs(C - c2) <= tol * (1.0 + std::abs(C)))
                        return {true, 'd', {p[0], p[1], p[2]}};
                }
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// covers
// ---------------------------------------------------------------------------
namespace {

// j-invariant from tau via theta constants
cplx j_from_tau(cplx tau) {
    ToleranceConfig cfg;
    cplx t2 = jacobi_theta(2, 0.0, tau, cfg);
    cplx t3 = jacobi_theta(3, 0.0, tau, cfg);
    cplx t4 = jacobi_theta(4, 0.0, tau, cfg);
    cplx a = std::pow(t2, 8) + std::pow(t3, 8) + std::pow(t4, 8);
    cplx b = std::pow(t2 * t3 * t4, 8);
    return 32.0 * a * a * a / b;
}

// roots of a monic cubic z^3 + p z + q ... general cubic via companion matrix
std::vector<cplx> poly_roots(const std::vector<cplx>& coef) {
    // coef: c0 + c1 z + ... + cn z^n
    int n = int(coef.size()) - 1;
    CMat comp = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -coef[i] / coef[n];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<CMat> es(comp);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

// period of dz/w^pw between two roots of w^3 = poly(z) on a tracked sheet
cplx cyclic_period(const std::vector<cplx>& coef, cplx za, cplx zb, int pw) {
    // straight segment, cube-root clustering at both ends, w tracked from mid
    auto poly = [&](cplx z) {
        cplx p = 0.0, zp = 1.0;
        for (const cplx& c : coef) {
            p += c * zp;
            zp *= z;
        }
        return p;
    };
    cplx mid = 0.5 * (za + zb);
    cplx wmid = std::pow(poly(mid), 1.0 / 3.0);
    auto integ = [&](cplx z0, cplx z1, cplx wseed) {
        cplx acc = 0.0;
        int panels = 96;
        cplx w = wseed;
        cplx d = z1 - z0;
        for (int p = 0; p < panels; ++p) {
            for (int q = 0; q < 16; ++q) {
                double t = (p + 0.5 * (1.0 + kGLx[q])) / panels;
                double u = 1.0 - (1.0 - t) * (1.0 - t) * (1.0 - t);
                double du = 3.0 * (1.0 - t) * (1.0 - t);
                cplx z = z0 + u * d;
                cplx f = poly(z);
                cplx r = std::pow(f, 1.0 / 3.0);
                cplx bw = r;
                double bd = std::abs(r - w);
                for (cplx cand : {r * kRho, r * kRho * kRho})
                    if (std::abs(cand - w) < bd) {
                        bd = std::abs(cand - w);
                        bw = cand;
                    }
                w = bw;
                cplx denom = (pw == 1) ? w : w * w;
                acc += (kGLw[q] * 0.5 / panels) * 2.0 * du * d / denom;
            }
        }
        return acc;
    };
    return integ(mid, zb, wmid) - integ(mid, za, wmid);
}

} // namespace

CoverInvariants cover_invariants(double b, const ToleranceConfig& cfg) {
    (void)cfg;
    CoverInvariants out;
    double L = std::pow(b * b + 4.0, 1.0 / 6.0);
    double L3 = L * L * L;
    auto jpm = [&](double sgn) {
        double num = 108.0 * L3 * std::pow(5.0 * L3 - sgn * 4.0 * b, 3.0);
        double den = std::pow(L3 + sgn * b, 2.0);
        if (std::abs(den) < 1e-14) throw DomainError("cover_invariants: pole at L^3 = -sgn b");
        return cplx(num / den);
    };
    out.j_plus = jpm(+1.0);
    out.j_minus = jpm(-1.0);
    cplx K = std::pow(cplx(-b, 2.0), 1.0 / 3.0);
    cplx M = K / L;
    cplx r = kRho;
    auto ksq = [&](double s) {
        return -r * (r * M + s) * std::pow(r * M - s, 3.0) /
               ((M + s) * std::pow(M - s, 3.0));
    };
    out.k_plus_sq = ksq(+1.0);
    out.k_minus_sq = ksq(-1.0);
    out.p = (1.0 + 2.0 * r) * (M - 1.0) / (M + 1.0);

    // equianharmonic quotients: w^3 = -(z^3 + 3z + b) and w^3 = -(z^2 + bz - 1)
    {
        auto roots = poly_roots({cplx(b), cplx(3.0), cplx(0.0), cplx(1.0)});
        std::vector<cplx> coef = {cplx(-b), cplx(-3.0), cplx(0.0), cplx(-1.0)};
        cplx T12 = cyclic_period(coef, roots[0], roots[1], 1);
        cplx T23 = cyclic_period(coef, roots[1], roots[2], 1);
        cplx P1 = (1.0 - r) * T12, P2 = (1.0 - r) * T23;
        cplx tau = P2 / P1;
        if (tau.imag() < 0) tau = -tau;
        // shift into a reasonable domain for theta evaluation
        tau -= std::round(tau.real());
        out.j1_equianharmonic = std::abs(j_from_tau(tau));
    }
    {
        auto roots = poly_roots({cplx(1.0), cplx(-b), cplx(-1.0)});
        std::vector<cplx> coef = {cplx(1.0), cplx(-b), cplx(-1.0)};
        cplx T12 = cyclic_period(coef, roots[0], roots[1], 2);
        // second period: loop through infinity; for the two-branch cyclic
        // cover the period lattice is generated by (1 - rho) T and (1 - rho^2) T
        cplx P1 = (1.0 - r) * T12;
        cplx P2 = (1.0 - r * r) * T12;
        cplx tau = P2 / P1;
        if (tau.imag() < 0) tau = 1.0 / tau;
        tau -= std::round(tau.real());
        out.j2_equianharmonic = std::abs(j_from_tau(tau));
    }
    return out;
}

InvolutionData InvolutionData::standard(double kappa_phase) {
    InvolutionData inv;
    inv.M.resize(8, 8);
    const long long rows[8][8] = {
        {0, 0, -1, 0, 0, -1, 0, -1}, {0, 0, 1, 1, -1, 0, 1, 0},  {-1, 1, 0, -1, 0, 1, 0, 1},
        {0, -1, 1, 2, -1, 0, 1, 0},  {0, -1, 1, 1, 0, 0, 1, 0},  {-1, 0, 0, -1, 0, 0, -1, 1},
        {1, 0, 0, 0, 1, -1, 0, -1},  {1, -1, 0, 2, 0, -1, 1, -2}};
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) inv.M(i, j) = rows[i][j];
    cplx kap(kappa_phase);
    inv.T = CMat::Zero(4, 4);
    inv.T(0, 0) = -kap;
    inv.T(1, 3) = kap * kap;
    inv.T(2, 2) = -kap * kap;
    inv.T(3, 1) = kap * kap;
    return inv;
}

double involution_check(const PeriodData& pd, const InvolutionData& inv) {
    CMat P(8, 4);
    P.topRows(4) = pd.A;
    P.bottomRows(4) = pd.B;
    CMat lhs = inv.M.cast<double>().cast<cplx>() * P;
    CMat rhs = P.conjugate() * inv.T;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

} // namespace monoct

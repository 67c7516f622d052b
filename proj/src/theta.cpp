#include "monoct/theta.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace monoct {

RVec ThetaCharacteristic::a_real() const {
    RVec v(genus());
    for (int i = 0; i < genus(); ++i) v[i] = a[i].value();
    return v;
}
RVec ThetaCharacteristic::b_real() const {
    RVec v(genus());
    for (int i = 0; i < genus(); ++i) v[i] = b[i].value();
    return v;
}
ThetaCharacteristic ThetaCharacteristic::half(const std::vector<int>& top,
                                              const std::vector<int>& bottom) {
    ThetaCharacteristic ch;
    for (int t : top) ch.a.push_back(Rational(t, 2));
    for (int t : bottom) ch.b.push_back(Rational(t, 2));
    return ch;
}
ThetaCharacteristic ThetaCharacteristic::zero(int g) {
    ThetaCharacteristic ch;
    ch.a.assign(g, Rational(0));
    ch.b.assign(g, Rational(0));
    return ch;
}

Parity char_parity(const ThetaCharacteristic& ch) {
    // parity of 4 a.b mod 2, half characteristics only
    long long s = 0;
    for (int i = 0; i < ch.genus(); ++i) {
        Rational p = ch.a[i] * ch.b[i] * Rational(4);
        if (!p.is_integer()) throw DomainError("char_parity: not a half characteristic");
        s += p.num;
    }
    return ((s % 2 + 2) % 2 == 0) ? Parity::Even : Parity::Odd;
}

double PeriodMatrixTau::check_conditioning() const {
    RMat Y = tau.imag();
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (Y + Y.transpose()));
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < 1e-8) throw NumericError("theta: Im(tau) ill conditioned");
    return lmin;
}

IMat SymplecticTransform::blockA() const {
    int g = genus();
    return m.topLeftCorner(g, g);
}
IMat SymplecticTransform::blockB() const {
    int g = genus();
    return m.topRightCorner(g, g);
}
IMat SymplecticTransform::blockC() const {
    int g = genus();
    return m.bottomLeftCorner(g, g);
}
IMat SymplecticTransform::blockD() const {
    int g = genus();
    return m.bottomRightCorner(g, g);
}
bool SymplecticTransform::is_symplectic() const {
    int g = genus();
    IMat J = IMat::Zero(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        J(i, g + i) = 1;
        J(g + i, i) = -1;
    }
    return (m * J * m.transpose() - J).cwiseAbs().maxCoeff() == 0;
}
SymplecticTransform SymplecticTransform::identity(int g) {
    SymplecticTransform s;
    s.m = IMat::Identity(2 * g, 2 * g);
    return s;
}

// -------------------------------------------------------------------------
// lattice enumeration: integer points n with (n-center)^T Y (n-center) <= R^2
// (Fincke-Pohst style recursion on the Cholesky factor)
// -------------------------------------------------------------------------
namespace {

void enumerate_rec(const RMat& L, const RVec& center, double R2, int k, RVec& n, double partial,
                   std::vector<RVec>& out) {
    // L lower Cholesky of Y: quadratic form = sum_i (L row contributions)^2.
    // recurse from the last coordinate
    int g = int(center.size());
    if (k < 0) {
        out.push_back(n);
        return;
    }
    // bound coordinate k given coordinates k+1..g-1:
    // q = sum_{j>=k} (sum over structure) -- use the transformed representation:
    // with y = L^T (n - center), q = |y|^2; enumerate in the order k = g-1 .. 0,
    // y_k = sum_{i>=k} L(i,k) (n_i - c_i)
    double lkk = L(k, k);
    double off = 0.0;
    for (int i = k + 1; i < g; ++i) off += L(i, k) * (n[i] - center[i]);
    double rem = R2 - partial;
    if (rem < 0) return;
    double half = std::sqrt(rem) / lkk;
    double mid = center[k] - off / lkk;
    long long lo = (long long)std::ceil(mid - half - 1e-12);
    long long hi = (long long)std::floor(mid + half + 1e-12);
    for (long long v = lo; v <= hi; ++v) {
        n[k] = double(v);
        double yk = lkk * (n[k] - mid);
        enumerate_rec(L, center, R2, k - 1, n, partial + yk * yk, out);
    }
}

} // namespace

std::vector<RVec> lattice_ellipsoid(const RMat& Y, const RVec& center, double radius2) {
    int g = int(Y.rows());
    Eigen::LLT<RMat> llt(Y);
    if (llt.info() != Eigen::Success) throw NumericError("lattice_ellipsoid: Y not positive definite");
    RMat L = llt.matrixL();
    // quadratic form (n-c)^T Y (n-c) = |L^T (n-c)|^2; enumerate on columns of L
    std::vector<RVec> out;
    RVec n = RVec::Zero(g);
    enumerate_rec(L, center, radius2, g - 1, n, 0.0, out);
    return out;
}

namespace {

// truncation radius in the Im(tau)-norm: terms with v^T Y v > R^2 are dropped;
// the shell count is controlled through the smallest eigenvalue of Y
double theta_radius(double lambda_min, int g, double tol) {
    double s = std::sqrt(std::max(lambda_min, 1e-12));
    double R = 1.0;
    for (int it = 0; it < 400; ++it) {
        double shells = 2.0 * std::pow(3.0 + 2.0 * (R + 1.0) / s, g);
        double bound = shells * std::exp(-kPi * R * R);
        if (bound < tol) return R;
        R += 0.25;
    }
    return 30.0;
}

struct ThetaPrep {
    std::vector<RVec> pts; // lattice points n (as reals)
    RVec shift;            // characteristic a
};

ThetaPrep theta_prepare(const RVec& a, const RMat& Y, const RVec& yIm, double lmin, double tol,
                        double extra_radius) {
    int g = int(Y.rows());
    // complete the square: |term| = exp(pi c^T Y c) exp(-pi v^T Y v), v = n + a + Y^{-1} yIm
    RVec c = Y.ldlt().solve(yIm);
    double R = theta_radius(lmin, g, tol) + extra_radius;
    RVec center = -(a + c);
    ThetaPrep prep;
    prep.pts = lattice_ellipsoid(Y, center, R * R);
    prep.shift = a;
    return prep;
}

} // namespace

cplx theta(const CVec& z, const PeriodMatrixTau& tau, const ThetaCharacteristic& ch,
           const std::vector<CVec>& deriv, const ToleranceConfig& cfg) {
    int g = tau.genus();
    if (int(z.size()) != g || ch.genus() != g)
        throw DomainError("theta: dimension mismatch");
    if (deriv.size() > 2) throw DomainError("theta: at most second derivatives");
    double lmin = tau.check_conditioning();

    RVec a = ch.a_real(), b = ch.b_real();
    RMat X = tau.tau.real(), Y = tau.tau.imag();
    RVec zr = z.real(), zi = z.imag();

    ThetaPrep prep = theta_prepare(a, Y, zi, lmin, cfg.abs_tol, 0.0);

    // fixed summation order for reproducibility (enumeration order is deterministic)
    cplx sum = 0.0;
    for (const RVec& n : prep.pts) {
        RVec na = n + a;
        double quad_re = na.dot(X * na); // (n+a)^T X (n+a)
        double quad_im = na.dot(Y * na);
        double lin_re = na.dot(zr + b);
        double lin_im = na.dot(zi);
        // exp(i pi quad + 2 i pi (n+a).(z+b))
        double ex = -kPi * quad_im - 2.0 * kPi * lin_im;
        double ph = kPi * quad_re + 2.0 * kPi * lin_re;
        cplx term = std::exp(ex) * cplx(std::cos(ph), std::sin(ph));
        for (const CVec& d : deriv) {
            cplx dir = 0.0;
            for (int i = 0; i < g; ++i) dir += na[i] * d[i];
            term *= cplx(0.0, 2.0 * kPi) * dir;
        }
        sum += term;
    }
    return sum;
}

cplx theta0(const CVec& z, const PeriodMatrixTau& tau, const std::vector<CVec>& deriv,
            const ToleranceConfig& cfg) {
    return theta(z, tau, ThetaCharacteristic::zero(tau.genus()), deriv, cfg);
}

// -------------------------------------------------------------------------
// Jacobi thetas via the g=1 characteristic specializations
//   theta1 = -theta[1/2,1/2], theta2 = theta[1/2,0],
//   theta3 = theta[0,0],      theta4 = theta[0,1/2]
// -------------------------------------------------------------------------
namespace {
ThetaCharacteristic jac_char(int i) {
    switch (i) {
        case 1: return ThetaCharacteristic::half({1}, {1});
        case 2: return ThetaCharacteristic::half({1}, {0});
        case 3: return ThetaCharacteristic::half({0}, {0});
        case 4: return ThetaCharacteristic::half({0}, {1});
    }
    throw DomainError("jacobi_theta: index must be 1..4");
}
} // namespace

cplx jacobi_theta(int i, cplx z, cplx tau, const ToleranceConfig& cfg) {
    if (tau.imag() <= 0) throw DomainError("jacobi_theta: Im tau must be positive");
    PeriodMatrixTau t;
    t.tau = CMat::Constant(1, 1, tau);
    CVec zv(1);
    zv[0] = z;
    cplx v = theta(zv, t, jac_char(i), {}, cfg);
    return (i == 1) ? -v : v;
}

cplx jacobi_theta_dz(int i, cplx z, cplx tau, const ToleranceConfig& cfg) {
    PeriodMatrixTau t;
    t.tau = CMat::Constant(1, 1, tau);
    CVec zv(1), dir(1);
    zv[0] = z;
    dir[0] = 1.0;
    cplx v = theta(zv, t, jac_char(i), {dir}, cfg);
    return (i == 1) ? -v : v;
}

// -------------------------------------------------------------------------
// characteristic transformation under Sp(2g,Z) (exact rationals)
//   g.(a,b) = (a,b) g^{-1} + 1/2 (diag(C D^T), diag(A B^T))
//   phi = -1/2(a D^T B a^T - 2 a B^T C b^T + b C^T A b^T)
//         + 1/2 (a D^T - b C^T) . diag(A B^T)
// -------------------------------------------------------------------------
CharTransformResult modular_transform_char(const ThetaCharacteristic& ch,
                                           const SymplecticTransform& g) {
    if (!g.is_symplectic()) throw DomainError("modular_transform_char: not symplectic");
    int n = g.genus();
    IMat A = g.blockA(), B = g.blockB(), C = g.blockC(), D = g.blockD();

    auto matvec = [&](const IMat& M, const RationalVec& v, bool transpose) {
        RationalVec out(n, Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                long long mij = transpose ? M(j, i) : M(i, j);
                out[i] = out[i] + Rational(mij) * v[j];
            }
        return out;
    };
    auto dotv = [&](const RationalVec& x, const RationalVec& y) {
        Rational s(0);
        for (int i = 0; i < n; ++i) s = s + x[i] * y[i];
        return s;
    };

    // row-vector conventions: (a', b') = (a, b) g^{-1}, g^{-1} = [[D^T, -B^T], [-C^T, A^T]]
    // a' = a D^T - b C^T      (as rows: a'_j = sum_i a_i D^T_{ij} ... )
    RationalVec aDT = matvec(D, ch.a, false);  // (a D^T)_j = sum_i a_i D_{ji} = (D a)_j
    RationalVec bCT = matvec(C, ch.b, false);
    RationalVec aBT = matvec(B, ch.a, false);
    RationalVec bAT = matvec(A, ch.b, false);

    ThetaCharacteristic out;
    out.a.resize(n);
    out.b.resize(n);
    IMat CDt = C * D.transpose();
    IMat ABt = A * B.transpose();
    for (int i = 0; i < n; ++i) {
        out.a[i] = aDT[i] - bCT[i] + Rational(CDt(i, i), 2);
        out.b[i] = bAT[i] - aBT[i] + Rational(ABt(i, i), 2);
    }

    // phase phi_{a,b}(g)
    RationalVec diagABt(n);
    for (int i = 0; i < n; ++i) diagABt[i] = Rational(ABt(i, i));
    RationalVec Ba = matvec(B, ch.a, true);   // B^T a ... used via a D^T B a^T = (aD^T) . (B^T a)? no:
    // a D^T B a^T = dot(a D^T, a B^T)? Using row conventions: a D^T B a^T = (aD^T) . (B^T a^T)^T = dot(aDT, aBT_rowform)
    Rational t1 = dotv(aDT, aBT);
    // a B^T C b^T = dot(a B^T, (C b^T)^T) = dot(aBT, bCT)
    Rational t2 = dotv(aBT, bCT);
    Rational t3 = dotv(bCT, bAT); // b C^T A b^T = dot(bC^T, bA^T)
    RationalVec lead(n);
    for (int i = 0; i < n; ++i) lead[i] = aDT[i] - bCT[i];
    Rational phi = -(t1 - Rational(2) * t2 + t3) * Rational(1, 2) +
                   dotv(lead, diagABt) * Rational(1, 2);
    return {out, phi};
}

// -------------------------------------------------------------------------
// ThetaLine
// -------------------------------------------------------------------------
ThetaLine::ThetaLine(const CVec& w0, const CVec& w1, const PeriodMatrixTau& tau, double t_lo,
                     double t_hi, const ToleranceConfig& cfg) {
    int g = tau.genus();
    double lmin = tau.check_conditioning();
    RMat Y = tau.tau.imag();
    RMat X = tau.tau.real();
    // the recentering moves with t; enclose both extremes
    RVec y0 = (w0 + t_lo * w1).imag();
    RVec y1 = (w0 + t_hi * w1).imag();
    RVec c0 = Y.ldlt().solve(y0);
    RVec c1 = Y.ldlt().solve(y1);
    RVec cm = 0.5 * (c0 + c1);
    RVec dc = 0.5 * (c1 - c0);
    double spread = std::sqrt(std::max(0.0, dc.dot(Y * dc)));
    double R = theta_radius(lmin, g, cfg.abs_tol) + spread + 0.5;
    RVec center = -cm;
    auto pts = lattice_ellipsoid(Y, center, R * R);
    c_.reserve(pts.size());
    d_.reserve(pts.size());
    for (const RVec& n : pts) {
        double quad_re = n.dot(X * n), quad_im = n.dot(Y * n);
        cplx lin0 = 0.0, lin1 = 0.0;
        for (int i = 0; i < g; ++i) {
            lin0 += n[i] * w0[i];
            lin1 += n[i] * w1[i];
        }
        cplx logc = cplx(0, kPi) * cplx(quad_re, quad_im) + cplx(0, 2.0 * kPi) * lin0;
        c_.push_back(std::exp(logc));
        d_.push_back(cplx(0, 2.0 * kPi) * lin1);
    }
}

cplx ThetaLine::value(double t) const {
    cplx s = 0.0;
    for (size_t i = 0; i < c_.size(); ++i) s += c_[i] * std::exp(t * d_[i]);
    return s;
}
cplx ThetaLine::deriv(double t) const {
    cplx s = 0.0;
    for (size_t i = 0; i < c_.size(); ++i) s += c_[i] * d_[i] * std::exp(t * d_[i]);
    return s;
}

// -------------------------------------------------------------------------
// Weierstrass-reduced theta:
//   theta((z,w); tau') = sum_m theta(z + Q m; tau1) theta[D^{-1} m; 0](D w; D tau# D)
// with m_i in [0, d_i), D = diag(d_i) clearing the rational block Q.
// -------------------------------------------------------------------------
namespace {
long long rational_den(double x, long long max_den, double tol) {
    for (long long d = 1; d <= max_den; ++d) {
        double r = x * double(d);
        if (std::abs(r - std::round(r)) < tol * double(d)) return d;
    }
    return 0;
}
} // namespace

cplx theta_reduce(const CVec& z_head, const CVec& w_tail, const PeriodMatrixTau& tau_reduced,
                  int g1, const ToleranceConfig& cfg) {
    int g = tau_reduced.genus();
    int g2 = g - g1;
    if (int(z_head.size()) != g1 || int(w_tail.size()) != g2)
        throw DomainError("theta_reduce: block dimension mismatch");
    CMat tau1 = tau_reduced.tau.topLeftCorner(g1, g1);
    CMat Q = tau_reduced.tau.topRightCorner(g1, g2);
    CMat taus = tau_reduced.tau.bottomRightCorner(g2, g2);

    // detect rational Q with bounded denominator
    Eigen::Matrix<long long, Eigen::Dynamic, 1> dens(g2);
    RMat Qr(g1, g2);
    for (int j = 0; j < g2; ++j) {
        long long dj = 1;
        for (int i = 0; i < g1; ++i) {
            if (std::abs(Q(i, j).imag()) > 1e-9)
                throw DomainError("theta_reduce: off-diagonal block not rational");
            long long d = rational_den(Q(i, j).real(), 420, 1e-9);
            if (d == 0) throw DomainError("theta_reduce: off-diagonal block not rational");
            dj = std::lcm(dj, d);
            Qr(i, j) = std::round(Q(i, j).real() * 1e12) / 1e12;
        }
        dens[j] = dj;
    }

    PeriodMatrixTau t1{tau1};
    CMat Dm = CMat::Zero(g2, g2);
    for (int j = 0; j < g2; ++j) Dm(j, j) = double(dens[j]);
    PeriodMatrixTau t2{Dm * taus * Dm};

    cplx sum = 0.0;
    std::vector<long long> idx(g2, 0);
    while (true) {
        CVec z1 = z_head;
        for (int i = 0; i < g1; ++i)
            for (int j = 0; j < g2; ++j) z1[i] += Qr(i, j) * double(idx[j]);
        ThetaCharacteristic chm;
        chm.a.resize(g2);
        chm.b.assign(g2, Rational(0));
        for (int j = 0; j < g2; ++j) chm.a[j] = Rational(idx[j], dens[j]);
        CVec w2(g2);
        for (int j = 0; j < g2; ++j) w2[j] = double(dens[j]) * w_tail[j];
        sum += theta(z1, t1, ThetaCharacteristic::zero(g1), {}, cfg) *
               theta(w2, t2, chm, {}, cfg);
        int k = 0;
        for (; k < g2; ++k) {
            if (++idx[k] < dens[k]) break;
            idx[k] = 0;
        }
        if (k == g2) break;
    }
    return sum;
}

} // namespace monoct

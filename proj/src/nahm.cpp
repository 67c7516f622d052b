#include "monoct/nahm.hpp"

#include <cmath>

namespace monoct {

namespace {
const cplx kRho = cube_root_unity();
const cplx kI(0.0, 1.0);

CVec cvec1(cplx v) {
    CVec x(1);
    x[0] = v;
    return x;
}

cplx dln_theta_dir(const CVec& z, const PeriodMatrixTau& tau, const CVec& dir,
                   const ToleranceConfig& cfg) {
    cplx val = theta0(z, tau, {}, cfg);
    cplx der = theta0(z, tau, {dir}, cfg);
    return der / val;
}

} // namespace

SpectralFrame charge2_frame(double k, const ToleranceConfig& cfg) {
    (void)cfg;
    if (!(k > 0.0 && k < 1.0)) throw DomainError("charge2_frame: 0 < k < 1 required");
    double kp = std::sqrt(1.0 - k * k);
    double K = elliptic_K(k), Kp = elliptic_K(kp);
    cplx tau(0.0, Kp / K);
    SpectralFrame fr;
    fr.n = 2;
    fr.tau.tau = CMat::Constant(1, 1, tau);
    fr.U = cvec1(-0.5);
    fr.Kt = cvec1(0.5 * (1.0 + tau));
    fr.p_tilde.resize(1);
    fr.q_tilde.resize(1);
    fr.p_tilde[0] = -2;
    fr.q_tilde[0] = -1;
    fr.phi_inf = {cvec1(0.25 * (1.0 + tau)), cvec1(-0.25 * (1.0 + tau))};
    fr.rho.resize(2);
    fr.rho[0] = cplx(0.0, -0.5 * K);
    fr.rho[1] = cplx(0.0, 0.5 * K);
    fr.V = {cvec1(-1.0 / (4.0 * fr.rho[0])), cvec1(-1.0 / (4.0 * fr.rho[1]))};
    fr.phi_zero = {cvec1(0.25 * (1.0 - tau)), cvec1(-0.25 * (1.0 - tau))};
    fr.eta0.resize(2);
    fr.eta0[0] = fr.rho[0]; // -conj(rho_k) = rho_k for imaginary rho
    fr.eta0[1] = fr.rho[1];
    fr.Dzero = {cvec1(1.0 / (4.0 * fr.eta0[0])), cvec1(1.0 / (4.0 * fr.eta0[1]))};
    return fr;
}

SpectralFrame charge3_frame(const ESData& es, const PeriodData& pd, const ToleranceConfig& cfg) {
    SpectralFrame fr;
    fr.n = 3;
    fr.tau = pd.tau_a;
    fr.chi_cuberoot = es.chi_cuberoot;
    const CMat& tau = fr.tau.tau;
    CVec nv(4), mv(4);
    for (int i = 0; i < 4; ++i) {
        nv[i] = double(es.n[i]);
        mv[i] = double(es.m[i]);
    }
    fr.U = 0.5 * (mv + tau * nv);
    CVec one = CVec::Ones(4);
    fr.Kt = 0.5 * (one + tau * one);
    fr.p_tilde.resize(4);
    fr.q_tilde.resize(4);
    for (int i = 0; i < 4; ++i) {
        fr.p_tilde[i] = es.m[i] - 1;
        fr.q_tilde[i] = es.n[i] - 1;
    }
    AbelFamily fam = abel_family(pd, cfg);
    for (int j = 1; j <= 3; ++j) fr.phi_inf.push_back(fam.phi_inf(j));
    for (int k = 1; k <= 3; ++k) fr.phi_zero.push_back(fam.phi_zero(k));
    // infinity sheet factors e_j = rho^j; half-differential directions
    // v/dt with du/dt = (-1/e, 0, 0, -1/e^2)
    fr.rho.resize(3);
    fr.eta0.resize(3);
    for (int j = 1; j <= 3; ++j) {
        cplx e = std::pow(kRho, j);
        CVec dudt(4);
        dudt << -1.0 / e, 0.0, 0.0, -1.0 / (e * e);
        fr.V.push_back(fam.Binv_t * dudt);
        fr.rho[j - 1] = -es.chi_cuberoot * e;
        // 0_k: w(0_k) = -rho^{k-1}; eta = -chi^{1/3} w
        cplx w0 = -std::pow(kRho, j - 1);
        fr.eta0[j - 1] = -es.chi_cuberoot * w0;
        CVec dudz(4);
        dudz << 1.0 / w0, 1.0 / (w0 * w0), 0.0, 0.0;
        fr.Dzero.push_back(fam.Binv_t * dudz);
    }
    return fr;
}

PrimeFormFrame select_prime_form_frame(const SpectralFrame& fr, double grad_floor,
                                       const ToleranceConfig& cfg) {
    int g = fr.tau.genus();
    // enumerate half characteristics in a fixed order, odd ones only
    for (long long code = 0; code < (1LL << (2 * g)); ++code) {
        ThetaCharacteristic ch;
        for (int i = 0; i < g; ++i) ch.a.push_back(Rational((code >> i) & 1, 2));
        for (int i = 0; i < g; ++i) ch.b.push_back(Rational((code >> (g + i)) & 1, 2));
        if (char_parity(ch) != Parity::Odd) continue;
        CVec z0 = CVec::Zero(g);
        bool ok = true;
        CVec h(fr.n);
        for (int j = 0; j < fr.n && ok; ++j) {
            cplx hsq = theta(z0, fr.tau, ch, {fr.V[j]}, cfg);
            if (std::abs(hsq) < grad_floor) ok = false;
            h[j] = std::sqrt(hsq);
        }
        if (ok) return {ch, h};
    }
    throw NumericError("select_prime_form_frame: every odd characteristic is singular here");
}

CMat prime_form_infinities(const SpectralFrame& fr, const PrimeFormFrame& frame,
                           const ToleranceConfig& cfg) {
    int n = fr.n;
    CMat E = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            CVec arg = fr.phi_inf[j] - fr.phi_inf[l];
            cplx num = theta(arg, fr.tau, frame.odd_char, {}, cfg);
            E(j, l) = num / (frame.h_at_inf[j] * frame.h_at_inf[l]);
        }
    double anti = (E + E.transpose()).cwiseAbs().maxCoeff();
    if (anti > 1e-7 * (1.0 + E.cwiseAbs().maxCoeff()))
        throw NumericError("prime_form_infinities: antisymmetry violated");
    return E;
}

CMat nu_differences(const SpectralFrame& fr, const ToleranceConfig& cfg) {
    int n = fr.n;
    CVec X0 = fr.U - fr.Kt;
    cplx base = dln_theta_dir(X0, fr.tau, fr.U, cfg);
    CMat nu = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            // entry (j,l) carries nu_l - nu_j
            CVec arg = fr.phi_inf[l] - fr.phi_inf[j] + X0;
            nu(j, l) = base - dln_theta_dir(arg, fr.tau, fr.U, cfg);
        }
    double anti = (nu + nu.transpose()).cwiseAbs().maxCoeff();
    if (anti > 1e-7 * (1.0 + nu.cwiseAbs().maxCoeff()))
        throw NumericError("nu_differences: antisymmetry violated");
    return nu;
}

CMat nu_differences_thirdkind(const SpectralFrame& fr, const ToleranceConfig& cfg) {
    // nu_i - nu_j = -sum_k eta(0_k) d/dzeta ln[theta_ab(phi(0_k)-phi(inf_i)) /
    //                                          theta_ab(phi(0_k)-phi(inf_j))]
    PrimeFormFrame pf = select_prime_form_frame(fr, 1e-6, cfg);
    int n = fr.n;
    auto dln = [&](const CVec& z, const CVec& dir) {
        cplx v = theta(z, fr.tau, pf.odd_char, {}, cfg);
        cplx d = theta(z, fr.tau, pf.odd_char, {dir}, cfg);
        return d / v;
    };
    CMat nu = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) {
                CVec zl = fr.phi_zero[k] - fr.phi_inf[l];
                CVec zj = fr.phi_zero[k] - fr.phi_inf[j];
                s += fr.eta0[k] * (dln(zl, fr.Dzero[k]) - dln(zj, fr.Dzero[k]));
            }
            nu(j, l) = -s; // nu_l - nu_j
        }
    return nu;
}

CMat nu_differences_periods(const SpectralFrame& fr, const PeriodData& pd,
                            const ToleranceConfig& cfg) {
    (void)cfg;
    if (fr.n != 3) throw DomainError("nu_differences_periods: symmetric charge-3 frame required");
    // Wellstein normalization: nu^W_l - nu^W_j = 3 ytil . int_{inf_j}^{inf_l} v
    //   + (rho^{l-1} - rho^{j-1}) L1,  ytil = rho^2 H y (second-frame periods of dr1),
    // then scaled by -chi^{1/3}
    RMat H = hmat4();
    CVec ytil = kRho * kRho * (H.cast<cplx>() * pd.y);
    CMat nu = CMat::Zero(3, 3);
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
            if (j == l) continue;
            CVec dphi = fr.phi_inf[l] - fr.phi_inf[j];
            cplx sterm = (std::pow(kRho, l) - std::pow(kRho, j)) * pd.L1;
            cplx w = 3.0 * (ytil.transpose() * dphi)(0, 0) + sterm;
            nu(j, l) = -fr.chi_cuberoot * w;
        }
    return nu;
}

// ---------------------------------------------------------------------------
// Q0 assembly
// ---------------------------------------------------------------------------
Q0Assembly::Q0Assembly(const SpectralFrame& fr, const std::vector<int>& eps_signs,
                       const ToleranceConfig& cfg)
    : fr_(std::make_shared<SpectralFrame>(fr)) {
    int n = fr.n;
    if (int(eps_signs.size()) != n - 1)
        throw DomainError("Q0Assembly: need n-1 epsilon signs");
    pframe_ = select_prime_form_frame(fr, 1e-6, cfg);
    E_ = prime_form_infinities(fr, pframe_, cfg);
    nu_ = nu_differences(fr, cfg);

    // epsilon_{jl} = prod of adjacent signs
    auto eps = [&](int j, int l) {
        if (j > l) std::swap(j, l);
        int s = 1;
        for (int t = j; t < l; ++t) s *= eps_signs[t];
        return double(s);
    };
    CVec X0 = fr.U - fr.Kt;
    pref_ = CMat::Zero(n, n);
    lines_.resize(n * n + 1);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            CVec dphi = fr.phi_inf[l] - fr.phi_inf[j];
            cplx qdot = 0.0;
            for (int i = 0; i < fr.tau.genus(); ++i) qdot += double(fr.q_tilde[i]) * dphi[i];
            pref_(j, l) = eps(j, l) * (fr.rho[j] - fr.rho[l]) / E_(j, l) *
                          std::exp(kI * kPi * qdot);
            lines_[idx(j, l)] =
                std::make_unique<ThetaLine>(dphi + X0, fr.U, fr.tau, -1.2, 1.2, cfg);
        }
    lines_[n * n] = std::make_unique<ThetaLine>(X0, fr.U, fr.tau, -1.2, 1.2, cfg);
}

cplx Q0Assembly::theta_den(double z) const { return lines_[fr_->n * fr_->n]->value(z); }
cplx Q0Assembly::theta_num(int j, int l, double z) const { return lines_[idx(j, l)]->value(z); }

CMat Q0Assembly::value(double z) const {
    int n = fr_->n;
    cplx den = theta_den(z);
    CMat Q = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            Q(j, l) = pref_(j, l) * lines_[idx(j, l)]->value(z) / den * std::exp(z * nu_(j, l));
        }
    return Q;
}

CMat Q0Assembly::deriv(double z) const {
    int n = fr_->n;
    cplx den = theta_den(z);
    cplx dden = lines_[n * n]->deriv(z);
    CMat Q = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            cplx f = lines_[idx(j, l)]->value(z);
            cplx fp = lines_[idx(j, l)]->deriv(z);
            Q(j, l) = pref_(j, l) * std::exp(z * nu_(j, l)) *
                      ((fp + nu_(j, l) * f) / den - f * dden / (den * den));
        }
    return Q;
}

Q0Grid charge3_q0(const ESData& es, const PeriodData& pd, const std::vector<int>& eps_signs,
                  const std::vector<double>& grid, const ToleranceConfig& cfg) {
    SpectralFrame fr = charge3_frame(es, pd, cfg);
    Q0Assembly q0(fr, eps_signs, cfg);
    Q0Grid out;
    out.rho = fr.rho;
    out.nu_diff = q0.nu();
    out.z_nodes = grid;
    double scale = 0.0;
    std::vector<cplx> dens(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        dens[i] = q0.theta_den(grid[i]);
        scale = std::max(scale, std::abs(dens[i]));
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        out.pole_flag.push_back(std::abs(dens[i]) < 1e-9 * scale);
        out.values.push_back(q0.value(grid[i]));
    }
    return out;
}

std::vector<ThetaZero> zero_scan(const ESData& es, const PeriodData& pd, int samples,
                                 const ToleranceConfig& cfg) {
    SpectralFrame fr = charge3_frame(es, pd, cfg);
    // s = z + 1 in [0, 2]: theta(s U - Kt)
    CVec X0 = -fr.Kt;
    ThetaLine den(X0, fr.U, fr.tau, 0.0, 2.0, cfg);
    std::vector<std::unique_ptr<ThetaLine>> nums;
    for (int j = 0; j < fr.n; ++j)
        for (int l = 0; l < fr.n; ++l)
            if (j != l)
                nums.push_back(std::make_unique<ThetaLine>(fr.phi_inf[l] - fr.phi_inf[j] + X0,
                                                           fr.U, fr.tau, 0.0, 2.0, cfg));
    std::vector<double> s(samples), mag(samples);
    double scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        s[i] = 2.0 * double(i) / double(samples - 1);
        mag[i] = std::abs(den.value(s[i]));
        scale = std::max(scale, mag[i]);
    }
    std::vector<ThetaZero> zeros;
    auto refine = [&](double lo, double hi) {
        // golden-section on |theta|
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = std::abs(den.value(c)), fd = std::abs(den.value(d));
        for (int it = 0; it < 80 && (b - a) > 1e-9; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = std::abs(den.value(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = std::abs(den.value(d));
            }
        }
        return 0.5 * (a + b);
    };
    for (int i = 1; i + 1 < samples; ++i) {
        if (mag[i] <= mag[i - 1] && mag[i] <= mag[i + 1] && mag[i] < 2e-2 * scale) {
            double sz = refine(s[i - 1], s[i + 1]);
            double dm = std::abs(den.value(sz));
            if (dm > 1e-4 * scale) continue;
            double nm = 1e300;
            for (auto& nl : nums) nm = std::min(nm, std::abs(nl->value(sz)));
            zeros.push_back({sz, dm, nm});
        }
    }
    // endpoints s = 0, 2 vanish identically (theta(Kt) = 0)
    double nm0 = 1e300, nm2 = 1e300;
    for (auto& nl : nums) {
        nm0 = std::min(nm0, std::abs(nl->value(0.0)));
        nm2 = std::min(nm2, std::abs(nl->value(2.0)));
    }
    zeros.insert(zeros.begin(), {0.0, std::abs(den.value(0.0)), nm0});
    zeros.push_back({2.0, std::abs(den.value(2.0)), nm2});
    return zeros;
}

// ---------------------------------------------------------------------------
// charge-2 closed forms
// ---------------------------------------------------------------------------
std::array<double, 3> charge2_f(double k, double z) {
    double K = elliptic_K(k), kp = std::sqrt(1.0 - k * k);
    JacobiSCD s = jacobi_sn_cn_dn(K * z, k);
    if (std::abs(s.cn) < 1e-12) throw DomainError("charge2_f: pole of 1/cn");
    return {K * s.dn / s.cn, K * kp * s.sn / s.cn, K * kp / s.cn};
}

cplx charge2_q0_theta(double k, double z, const ToleranceConfig& cfg) {
    double K = elliptic_K(k), Kp = elliptic_K(std::sqrt(1.0 - k * k));
    cplx tau(0.0, Kp / K);
    cplx t2 = jacobi_theta(2, 0.0, tau, cfg), t4 = jacobi_theta(4, 0.0, tau, cfg);
    cplx num = jacobi_theta(4, 0.5 * z, tau, cfg), den = jacobi_theta(2, 0.5 * z, tau, cfg);
    return kPi * t2 * t4 / 2.0 * num / den;
}

// ---------------------------------------------------------------------------
// gauge flow
// ---------------------------------------------------------------------------
namespace {

struct FlowState {
    std::vector<double> z;
    std::vector<CMat> C;
};

FlowState integrate_flow(const Q0Assembly& q0, const std::vector<double>& grid) {
    // grid assumed sorted, containing 0 (or we insert it); RK4 between nodes
    int n = q0.frame().n;
    FlowState st;
    st.z = grid;
    st.C.resize(grid.size());
    // locate the node closest to zero, integrate outward both ways
    size_t i0 = 0;
    for (size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i]) < std::abs(grid[i0])) i0 = i;
    auto rk4_step = [&](CMat C, double z, double h) {
        auto f = [&](const CMat& Cc, double zz) { return (0.5 * Cc * q0.value(zz)).eval(); };
        CMat k1 = f(C, z);
        CMat k2 = f((C + 0.5 * h * k1).eval(), z + 0.5 * h);
        CMat k3 = f((C + 0.5 * h * k2).eval(), z + 0.5 * h);
        CMat k4 = f((C + h * k3).eval(), z + h);
        return (C + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).eval();
    };
    const double hmax = 2.5e-3;
    auto march = [&](size_t from, size_t to_incl, int dir) {
        CMat C = st.C[from];
        for (size_t i = from; i != to_incl; i += dir) {
            double z0 = st.z[i], z1 = st.z[i + dir];
            int steps = std::max(1, int(std::ceil(std::abs(z1 - z0) / hmax)));
            double h = (z1 - z0) / steps;
            double z = z0;
            for (int s = 0; s < steps; ++s) {
                C = rk4_step(C, z, h);
                z += h;
            }
            st.C[i + dir] = C;
        }
    };
    // start at z closest to 0: integrate a short hop 0 -> grid[i0] first
    CMat C0 = CMat::Identity(n, n);
    {
        double target = st.z[i0];
        int steps = std::max(1, int(std::ceil(std::abs(target) / hmax)));
        double h = (steps == 0) ? 0.0 : target / steps;
        double z = 0.0;
        for (int s = 0; s < steps && std::abs(target) > 0; ++s) {
            C0 = rk4_step(C0, z, h);
            z += h;
        }
    }
    st.C[i0] = C0;
    if (i0 > 0) march(i0, 0, -1);
    if (i0 + 1 < st.z.size()) march(i0, st.z.size() - 1, +1);
    return st;
}

} // namespace

NahmSample solve_gauge_flow(const Q0Assembly& q0, const std::vector<double>& grid,
                            const ToleranceConfig& cfg) {
    (void)cfg;
    const SpectralFrame& fr = q0.frame();
    int n = fr.n;
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = fr.rho[i];
    FlowState st = integrate_flow(q0, grid);
    NahmSample out;
    out.z_nodes = grid;
    for (size_t i = 0; i < grid.size(); ++i) {
        double z = grid[i];
        const CMat& C = st.C[i];
        Eigen::FullPivLU<CMat> lu(C);
        if (!lu.isInvertible() ||
            C.cwiseAbs().maxCoeff() * lu.inverse().cwiseAbs().maxCoeff() > 1e8)
            throw NumericError("solve_gauge_flow: flow matrix ill conditioned");
        CMat Ci = lu.inverse();
        CMat Q = q0.value(z);
        CMat A0 = C * Q * Ci;
        CMat A1 = C * D * Ci;
        CMat Am1 = (-A1.adjoint()).eval();
        CMat T1 = 0.5 * (A1 + Am1);
        CMat T2 = (Am1 - A1) / (2.0 * kI);
        CMat T3 = 0.5 * kI * A0;
        // analytic derivatives through the flow: A1' = 1/2 C [Q, D] C^{-1},
        // A0' = C Q' C^{-1}, A_{-1}' = -(A1')^dagger
        CMat A1p = 0.5 * C * (Q * D - D * Q) * Ci;
        CMat A0p = C * q0.deriv(z) * Ci;
        CMat Am1p = (-A1p.adjoint()).eval();
        CMat T1p = 0.5 * (A1p + Am1p);
        CMat T2p = (Am1p - A1p) / (2.0 * kI);
        CMat T3p = 0.5 * kI * A0p;
        double r1 = (T1p - (T2 * T3 - T3 * T2)).cwiseAbs().maxCoeff();
        double r2 = (T2p - (T3 * T1 - T1 * T3)).cwiseAbs().maxCoeff();
        double r3 = (T3p - (T1 * T2 - T2 * T1)).cwiseAbs().maxCoeff();
        double ah = std::max({(T1 + T1.adjoint()).cwiseAbs().maxCoeff(),
                              (T2 + T2.adjoint()).cwiseAbs().maxCoeff(),
                              (T3 + T3.adjoint()).cwiseAbs().maxCoeff()});
        // Lax residual dA/dz - [A, M] at zeta = 1: A = A_{-1} + A0 + A1,
        // M = A0/2 + A1; componentwise identities give
        //   A_{-1}' - 1/2 [A_{-1}, A0] ; A0' - [A_{-1}, A1] ; A1' - 1/2 [A0, A1]
        double lx = std::max({(Am1p - 0.5 * (Am1 * A0 - A0 * Am1)).cwiseAbs().maxCoeff(),
                              (A0p - (Am1 * A1 - A1 * Am1)).cwiseAbs().maxCoeff(),
                              (A1p - 0.5 * (A0 * A1 - A1 * A0)).cwiseAbs().maxCoeff()});
        out.T1.push_back(T1);
        out.T2.push_back(T2);
        out.T3.push_back(T3);
        out.nahm_residual.push_back(std::max({r1, r2, r3}));
        out.antiherm_residual.push_back(ah);
        out.lax_residual.push_back(lx);
    }
    return out;
}

NahmSample charge2_nahm(double k, const std::vector<double>& grid, const ToleranceConfig& cfg) {
    SpectralFrame fr = charge2_frame(k, cfg);
    Q0Assembly q0(fr, {1}, cfg);
    return solve_gauge_flow(q0, grid, cfg);
}

SpectralCoeffs spectral_coeffs(const CMat& T1, const CMat& T2, const CMat& T3) {
    int n = int(T1.rows());
    CMat Am1 = T1 + kI * T2;
    CMat A0 = -2.0 * kI * T3;
    CMat A1 = T1 - kI * T2;
    int deg = 2 * n;
    // sample zeta on a circle and fit the polynomial coefficients
    int npts = deg + 1;
    std::vector<cplx> zs(npts), e2(npts), dt(npts), tr(npts);
    for (int i = 0; i < npts; ++i) {
        cplx zeta = 0.8 * std::exp(2.0 * kI * kPi * double(i) / double(npts));
        zs[i] = zeta;
        CMat M = Am1 + A0 * zeta + A1 * zeta * zeta;
        // char poly of M: det(eta I - M) = eta^n - tr eta^{n-1} + e2 eta^{n-2} - ...
        cplx trv = M.trace();
        cplx e2v = 0.5 * (trv * trv - (M * M).trace());
        cplx dtv = M.determinant();
        tr[i] = trv;
        e2[i] = e2v;
        dt[i] = dtv;
    }
    // Vandermonde solve
    CMat V(npts, npts);
    for (int i = 0; i < npts; ++i) {
        cplx p = 1.0;
        for (int j = 0; j < npts; ++j) {
            V(i, j) = p;
            p *= zs[i];
        }
    }
    Eigen::FullPivLU<CMat> lu(V);
    auto fit = [&](std::vector<cplx>& vals) {
        CVec rhs(npts);
        for (int i = 0; i < npts; ++i) rhs[i] = vals[i];
        CVec c = lu.solve(rhs);
        std::vector<cplx> out(npts);
        for (int i = 0; i < npts; ++i) out[i] = c[i];
        return out;
    };
    SpectralCoeffs out;
    out.tr = fit(tr);
    out.e2 = fit(e2);
    out.det = fit(dt);
    return out;
}

} // namespace monoct

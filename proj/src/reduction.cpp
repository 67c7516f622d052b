#include "monoct/reduction.hpp"

#include <cmath>
#include <numeric>

namespace monoct {

namespace {

const cplx kRho = cube_root_unity();

IMat sympJ(int g) {
    IMat J = IMat::Zero(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        J(i, g + i) = 1;
        J(g + i, i) = -1;
    }
    return J;
}

// accumulates left-multiplied generators of Sp(8,Z); g = 4 throughout
struct SpBuilder {
    IMat G = IMat::Identity(8, 8);

    void apply(const IMat& gen) { G = (gen * G).eval(); }

    // GL move: a-part -> P a-part, b-part -> P^{-T} b-part
    void gl(const IMat& P, const IMat& PinvT) {
        IMat gen = IMat::Zero(8, 8);
        gen.topLeftCorner(4, 4) = P;
        gen.bottomRightCorner(4, 4) = PinvT;
        apply(gen);
    }
    // elementary row op u_i += k u_j (i != j); inverse-transpose effect w_j -= k w_i
    void gl_add(int i, int j, long long k) {
        IMat P = IMat::Identity(4, 4), Pt = IMat::Identity(4, 4);
        P(i, j) = k;
        Pt(j, i) = -k;
        gl(P, Pt);
    }
    // u_i <-> u_j with sign (det +1): u_i' = u_j, u_j' = -u_i
    void gl_swap(int i, int j) {
        IMat P = IMat::Identity(4, 4);
        P(i, i) = 0;
        P(j, j) = 0;
        P(i, j) = 1;
        P(j, i) = -1;
        // P^{-T} = P for this rotation block
        gl(P, P);
    }
    void gl_negate(int i, int j) { // negate two axes, det +1
        IMat P = IMat::Identity(4, 4);
        P(i, i) = -1;
        P(j, j) = -1;
        gl(P, P);
    }
    // SL2 on the symplectic pair i: (u_i, w_i) -> (a u + b w, c u + d w), ad - bc = 1
    void sl2(int i, long long a, long long b, long long c, long long d) {
        IMat gen = IMat::Identity(8, 8);
        gen(i, i) = a;
        gen(i, 4 + i) = b;
        gen(4 + i, i) = c;
        gen(4 + i, 4 + i) = d;
        apply(gen);
    }
    // upper transvection u += S w with S = k E_ii (symmetric)
    void trans_upper(int i, long long k) { sl2(i, 1, k, 0, 1); }
    // mixed symmetric transvection S = k (E_ij + E_ji), i != j
    void trans_upper_mixed(int i, int j, long long k) {
        IMat gen = IMat::Identity(8, 8);
        gen(i, 4 + j) = k;
        gen(j, 4 + i) = k;
        apply(gen);
    }
    void trans_lower_mixed(int i, int j, long long k) {
        IMat gen = IMat::Identity(8, 8);
        gen(4 + i, j) = k;
        gen(4 + j, i) = k;
        apply(gen);
    }
};

// reduce the pair (v[i], v[4+i]) to (gcd, 0) by SL2 euclid, tracking moves in sb
void pair_euclid(SpBuilder& sb, IVec& v1, IVec& v2, int i) {
    auto apply_both = [&](auto&& f) {
        f();
        // moves already applied to sb; refresh tracked vectors
    };
    (void)apply_both;
    while (v1[4 + i] != 0 || v2[4 + i] != 0) {
        // operate using v1 as the primary tracked vector when nonzero there
        break;
    }
}

IVec apply_vec(const IMat& G, const IVec& v) { return G * v; }

} // namespace

PeriodMatrixTau act_on_tau(const SymplecticTransform& sigma, const PeriodMatrixTau& tau) {
    if (!sigma.is_symplectic()) throw DomainError("act_on_tau: sigma not symplectic");
    int g = tau.genus();
    CMat A = sigma.blockA().cast<double>().cast<cplx>();
    CMat B = sigma.blockB().cast<double>().cast<cplx>();
    CMat C = sigma.blockC().cast<double>().cast<cplx>();
    CMat D = sigma.blockD().cast<double>().cast<cplx>();
    CMat den = C * tau.tau + D;
    Eigen::FullPivLU<CMat> lu(den);
    if (!lu.isInvertible()) throw NumericError("act_on_tau: singular C tau + D");
    CMat t = (A * tau.tau + B) * lu.inverse();
    PeriodMatrixTau out;
    out.tau = 0.5 * (t + t.transpose()).eval();
    (void)g;
    out.check_conditioning();
    return out;
}

IVec transform_winding(const IVec& n, const IVec& m, const SymplecticTransform& sigma) {
    // row (n, m) times sigma^{-1}; sigma^{-1} = -J sigma^T J
    IMat J = sympJ(4);
    IMat inv = -J * sigma.m.transpose() * J;
    IVec row(8);
    row.head(4) = n;
    row.tail(4) = m;
    return inv.transpose() * row; // (row * inv)^T
}

long long alpha_gcd(long long n1, long long m1) {
    // Bezout p m1 + q n1 = 1
    long long g0 = std::gcd(std::llabs(n1), std::llabs(m1));
    if (g0 != 1) throw DomainError("alpha_gcd: gcd(n1, m1) must be 1");
    // extended euclid for p*m1 + q*n1 = 1
    long long a = m1, b = n1, pa = 1, qa = 0, pb = 0, qb = 1;
    while (b != 0) {
        long long q = a / b;
        long long r = a - q * b;
        long long pr = pa - q * pb, qr = qa - q * qb;
        a = b;
        pa = pb;
        qa = qb;
        b = r;
        pb = pr;
        qb = qr;
    }
    if (a < 0) {
        a = -a;
        pa = -pa;
        qa = -qa;
    }
    long long p0 = pa, q0 = qa; // p0*m1 + q0*n1 = 1
    long long c = m1 - 2 * n1;
    long long best = 0;
    for (long long k = -6; k <= 6; ++k) {
        long long p = p0 + k * n1, q = q0 - k * m1;
        if (p * m1 + q * n1 != 1) continue;
        long long u = m1 + 4 * n1 - q * c;
        long long v = n1 - 2 * m1 - p * c;
        long long g = std::gcd(std::llabs(u), std::llabs(v));
        if (g == 0) g = std::llabs(u + v);
        if (best == 0 || (g != 0 && g < best)) best = g;
    }
    return best;
}

ReducedForm reduce(const PeriodMatrixTau& tau, const ESData& es, const ToleranceConfig& cfg) {
    if (es.d == 0) throw DomainError("reduce: degenerate Hopf number");
    SpBuilder sb;
    IVec M2(8), M1(8);
    // M2 = (-m; n), M1 = (H n - m; H m)
    for (int i = 0; i < 4; ++i) {
        M2[i] = -es.m[i];
        M2[4 + i] = es.n[i];
    }
    long long Hs[4] = {1, 1, 1, -1};
    for (int i = 0; i < 4; ++i) {
        M1[i] = Hs[i] * es.n[i] - es.m[i];
        M1[4 + i] = Hs[i] * es.m[i];
    }

    auto cur2 = [&]() { return apply_vec(sb.G, M2); };
    auto cur1 = [&]() { return apply_vec(sb.G, M1); };

    // ---- step 1: each pair (u_i, w_i) of M2 to (g_i, 0) by SL2 euclid ----
    for (int i = 0; i < 4; ++i) {
        for (int guard = 0; guard < 128; ++guard) {
            IVec v = cur2();
            long long u = v[i], w = v[4 + i];
            if (w == 0) break;
            if (u == 0) {
                sb.sl2(i, 0, 1, -1, 0); // (u,w) -> (w, -u)
                continue;
            }
            long long q = u / w; // floor toward zero is fine for euclid descent
            sb.trans_upper(i, -q); // u -= q w
            IVec v2 = cur2();
            if (std::llabs(v2[i]) >= std::llabs(u) && v2[i] != 0) {
                // ensure progress: swap roles
                sb.sl2(i, 0, 1, -1, 0);
            }
        }
    }
    // ---- step 2: collect the a-part of M2 into coordinate 0 ----
    for (int j = 1; j < 4; ++j) {
        for (int guard = 0; guard < 128; ++guard) {
            IVec v = cur2();
            long long a = v[0], b = v[j];
            if (b == 0) break;
            if (a == 0) {
                sb.gl_swap(0, j);
                continue;
            }
            long long q = a / b;
            sb.gl_add(0, j, -q); // a -= q b
            IVec v2 = cur2();
            if (v2[0] != 0 && std::llabs(v2[0]) >= std::llabs(a)) sb.gl_swap(0, j);
        }
    }
    {
        IVec v = cur2();
        if (v[0] == 1) {
            sb.gl_negate(0, 1); // make it -e1
        } else if (v[0] != -1) {
            throw NumericError("reduce: winding vector not primitive after descent");
        }
    }

    // ---- step 3: genus-3 block cleanup of M1 on coordinates {1,2,3} ----
    // pair euclid on each (u_i, w_i), i in 1..3
    for (int i = 1; i < 4; ++i) {
        for (int guard = 0; guard < 128; ++guard) {
            IVec v = cur1();
            long long u = v[i], w = v[4 + i];
            if (w == 0) break;
            if (u == 0) {
                sb.sl2(i, 0, 1, -1, 0);
                continue;
            }
            long long q = u / w;
            sb.trans_upper(i, -q);
            IVec v2 = cur1();
            if (std::llabs(v2[i]) >= std::llabs(u) && v2[i] != 0) sb.sl2(i, 0, 1, -1, 0);
        }
    }
    // collect u_2, u_3 into u_1 (indices 2,3 -> 1)
    for (int j = 2; j < 4; ++j) {
        for (int guard = 0; guard < 128; ++guard) {
            IVec v = cur1();
            long long a = v[1], b = v[j];
            if (b == 0) break;
            if (a == 0) {
                sb.gl_swap(1, j);
                continue;
            }
            long long q = a / b;
            sb.gl_add(1, j, -q);
            IVec v2 = cur1();
            if (v2[1] != 0 && std::llabs(v2[1]) >= std::llabs(a)) sb.gl_swap(1, j);
        }
    }
    // make alpha nonnegative
    if (cur1()[1] < 0) sb.gl_negate(1, 2);

    // ---- step 4: reduce u_0 of M1 modulo d using w_0 = d ----
    {
        IVec v = cur1();
        long long d = v[4]; // w-part coordinate 0
        if (d != es.d) {
            // the symplectic pairing fixes |d|; sign conventions may differ
            if (std::llabs(d) != std::llabs(es.d))
                throw NumericError("reduce: pairing mismatch");
        }
        long long beta = v[0];
        long long ad = std::llabs(d);
        long long s = -(long long)std::floor(double(beta) / double(d));
        sb.trans_upper(0, s);
        IVec v2 = cur1();
        beta = v2[0];
        while (beta < 0) {
            sb.trans_upper(0, (d > 0) ? 1 : -1);
            beta = cur1()[0];
        }
        while (beta >= ad) {
            sb.trans_upper(0, (d > 0) ? -1 : 1);
            beta = cur1()[0];
        }
    }

    ReducedForm out;
    out.sigma.m = sb.G;
    if (!out.sigma.is_symplectic()) throw NumericError("reduce: accumulated matrix not symplectic");
    IVec f1 = cur1(), f2 = cur2();
    if (!(f2[0] == -1 && f2.tail(7).cwiseAbs().maxCoeff() == 0))
        throw NumericError("reduce: winding vector normalization failed");
    for (int i : {2, 3})
        if (f1[i] != 0 || f1[4 + i] != 0) throw NumericError("reduce: block cleanup failed");
    if (f1[4 + 1] != 0) throw NumericError("reduce: block cleanup failed");
    out.d = f1[4];
    out.alpha_entry = f1[1];
    out.beta_entry = f1[0];
    out.tau_prime = act_on_tau(out.sigma, tau);
    return out;
}

} // namespace monoct

#pragma once

#include "monoct/special.hpp"
#include "monoct/theta.hpp"

#include <array>
#include <optional>

namespace monoct {

// the symmetric trigonal family w^3 = z^6 + b z^3 - 1
struct SymmetricCurve {
    double b = 0.0;
    double alpha = 1.0;        // positive real branch radius
    double beta = -1.0;        // = -1/alpha
    double chi = 0.0;          // optional normalization (set by the ES layer)
    double chi_cuberoot = 0.0;

    static SymmetricCurve from_b(double b);
    // branch points ordered by argument: (alpha, rho^2 beta, rho alpha, beta, rho^2 alpha, rho beta)
    std::array<cplx, 6> branch_points() const;
};

struct GeneralSextic {
    std::array<cplx, 6> lambda; // pairwise distinct, ordered by argument
    // sheet-1 reference: w(z_ref) = w_ref fixes the labeling of sheets
    cplx z_ref = 0.0;
    cplx w_ref = -1.0;

    static GeneralSextic from_symmetric(const SymmetricCurve& c);
    cplx poly(cplx z) const;      // prod (z - lambda_i)
    cplx w_on_sheet1_at_ref() const { return w_ref; }
};

// full period data of the symmetric curve in the homology basis of the text
struct PeriodData {
    double b = 0.0;
    double alpha = 1.0;
    CMat A, B;                       // 4x4 a- and b-period matrices of du_1..du_4
    CVec x, b_vec, c_vec, d_vec;     // columns of A
    CVec y;                          // a-periods of dr_1 = z^4 dz/(3 w^2)
    std::array<cplx, 4> I, J;        // branch integrals I_1..I_4, J_1..J_4
    cplx K1, L1;                     // second-kind tail integrals
    PeriodMatrixTau tau_a;           // = A B^{-1}: the Siegel-domain matrix used by thetas
    PeriodMatrixTau tau_b;           // = B A^{-1} = tau_a^{-1}
    cplx Delta;                      // x^T H x
};

struct InvolutionData {
    IMat M;  // 8x8 integer involution on homology
    CMat T;  // 4x4 with kappa = chi^{1/3}/conj(chi^{1/3})

    static InvolutionData standard(double kappa_phase = 1.0);
};

inline RMat hmat4() {
    RMat H = RMat::Identity(4, 4);
    H(3, 3) = -1.0;
    return H;
}

// closed hypergeometric-form periods and assembled matrices
PeriodData periods_symmetric(double b, const ToleranceConfig& cfg = {});

// tau = rho (H - (1-rho) x x^T / (x^T H x)); requires conj(x)^T H x < 0
PeriodMatrixTau period_matrix_from_x(const CVec& x);

// quadrature of (dz/w, dz/w^2, z dz/w^2, z^2 dz/w^2) along the straight
// segment between two branch points on the given sheet (1..3); the sheet is
// fixed by continuing w from the curve's reference point to the segment
// midpoint along a straight path.
CVec quad_period(const GeneralSextic& curve, int from_bp, int to_bp, int sheet,
                 const ToleranceConfig& cfg = {});

// the same four differentials integrated from z0 to z1 along a straight
// segment starting on the sheet whose w-value at z0 is w0 (utility for
// oracle compositions); endpoints may be branch points.
CVec quad_segment(const GeneralSextic& curve, cplx z0, cplx z1, cplx w0,
                  const ToleranceConfig& cfg = {});

// branch integrals of Appendix-type period combinations:
// int over gamma_sheet(lambda_i, lambda_j) of the four differentials as
// rational combinations of a/b-periods.  Supported pairs chain through
// (1,2),(3,4),(5,6),(1,6) and the (4,5) reduction (mod lattice).
struct BranchIntegral {
    CVec value;          // 4-vector
    bool mod_lattice;    // true when defined only modulo the period lattice
};
BranchIntegral branch_integral(int i, int j, int sheet, const PeriodData& pd);

// Abel maps between infinities for du_1..du_4 (closed forms):
//   int_{inf1}^{inf2}, int_{inf1}^{inf3}, int_{inf2}^{inf3}
std::array<CVec, 3> abel_infinities(const PeriodData& pd);

// consistent numerically-integrated Abel family with base point 0_1:
// values of int_{0_1}^{inf_j} du and int_{0_1}^{0_k} du along fixed rays
struct AbelFamily {
    std::array<CVec, 3> to_infinity; // index j-1; du-integrals
    std::array<CVec, 3> to_zero;     // index k-1; du-integrals (0_1 gives zero)
    CMat Binv_t;                     // B^{-T}, converts du-integrals to normalized phi
    CVec phi_inf(int j) const { return Binv_t * to_infinity[j - 1]; }
    CVec phi_zero(int k) const { return Binv_t * to_zero[k - 1]; }
};
AbelFamily abel_family(const PeriodData& pd, const ToleranceConfig& cfg = {});

// vector of Riemann constants with base point Q1 = (lambda_1, 0)
struct RiemannConstants {
    CVec K;               // computed from the defining a-cycle averages
    CVec half_period;     // (1/2)(1 + tau.1)
    RVec lattice_coords;  // K - half_period in lattice coordinates (p;q)
    double lattice_residual;
};
RiemannConstants riemann_constants(const PeriodData& pd, const ToleranceConfig& cfg = {});

// reduce v modulo the lattice Z^g + tau Z^g: v = p + tau q + r
struct LatticeReduction {
    RVec pq;        // rounded integer coordinates, length 2g
    CVec residual;  // v - (p + tau q)
    double residual_norm;
};
LatticeReduction reduce_mod_lattice(const CVec& v, const PeriodMatrixTau& tau);

// branch-point recovery from sixth-order theta constants at tau
struct RecoveredBranchPoints {
    cplx L1, L2, L3;
};
RecoveredBranchPoints recover_branch_points(const PeriodMatrixTau& tau,
                                            const ToleranceConfig& cfg = {});

// normalized-curve branch values from the cross-ratio formulas
RecoveredBranchPoints normalized_branch_points(const GeneralSextic& curve);

struct MobiusRealityResult {
    bool equivalent = false;
    char case_label = '-'; // 'a'..'d'
    std::array<int, 3> permutation{0, 1, 2};
};
MobiusRealityResult mobius_reality_check(cplx L1, cplx L2, cplx L3, double tol = 1e-8);

struct CoverInvariants {
    cplx j_plus, j_minus;
    cplx k_plus_sq, k_minus_sq;
    cplx p;                      // Ramanujan parameter from the M-substitution
    double j1_equianharmonic;    // |j| of the z^3+w^3+3z+b quotient (want 0)
    double j2_equianharmonic;    // |j| of the w^3+z^2+bz-1 quotient (want 0)
};
CoverInvariants cover_invariants(double b, const ToleranceConfig& cfg = {});

// || M (A;B) - conj((A;B)) T ||_max
double involution_check(const PeriodData& pd, const InvolutionData& inv);

} // namespace monoct

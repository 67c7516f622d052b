#pragma once

#include "monoct/es.hpp"

#include <functional>
#include <memory>

namespace monoct {

// curve data shared by the flow machinery: everything the theta-quotient
// matrix needs, in the normalization of the working period matrix
struct SpectralFrame {
    int n = 0;                     // charge / matrix size
    PeriodMatrixTau tau;           // genus = n(n-1)... here 1 or 4
    CVec U;                        // winding half period (point)
    CVec Kt;                       // Riemann-constant half period (point)
    IVec p_tilde, q_tilde;         // 2(U - Kt) = p + tau q
    std::vector<CVec> phi_inf;     // Abel images of the infinities, common base
    std::vector<CVec> V;           // v/dt directions at the infinities (t = 1/zeta)
    CVec rho;                      // eigenvalue data at the infinities
    std::vector<CVec> phi_zero;    // Abel images of the points over zeta = 0
    CVec eta0;                     // eta at those points
    std::vector<CVec> Dzero;       // v/dzeta directions at the 0-points
    double chi_cuberoot = 0.0;     // 0 for charge 2 (not used there)
};

SpectralFrame charge2_frame(double k, const ToleranceConfig& cfg = {});
SpectralFrame charge3_frame(const ESData& es, const PeriodData& pd,
                            const ToleranceConfig& cfg = {});

struct PrimeFormFrame {
    ThetaCharacteristic odd_char;
    CVec h_at_inf; // half-differential values h(inf_j) (a square root per point)
};
// enumerate odd half characteristics; pick the first with all |h|^2 above the floor
PrimeFormFrame select_prime_form_frame(const SpectralFrame& fr, double grad_floor = 1e-6,
                                       const ToleranceConfig& cfg = {});
// antisymmetric matrix of prime-form values E(inf_j, inf_l)
CMat prime_form_infinities(const SpectralFrame& fr, const PrimeFormFrame& frame,
                           const ToleranceConfig& cfg = {});

// nu_l - nu_j from the directional logarithmic derivative of theta along U
// (the normalization that makes each off-diagonal entry of Q0 stationary at
// z = 0, as the flow equations require); entry (j,l) holds nu_l - nu_j
CMat nu_differences(const SpectralFrame& fr, const ToleranceConfig& cfg = {});
// third-kind-differential route (residues at the points over zeta = 0);
// agrees with nu_differences modulo periods of the second-kind differential
CMat nu_differences_thirdkind(const SpectralFrame& fr, const ToleranceConfig& cfg = {});
// hypergeometric tail route for the symmetric family (charge 3)
CMat nu_differences_periods(const SpectralFrame& fr, const PeriodData& pd,
                            const ToleranceConfig& cfg = {});

// the assembled theta-quotient flow matrix
class Q0Assembly {
  public:
    Q0Assembly(const SpectralFrame& fr, const std::vector<int>& eps_signs,
               const ToleranceConfig& cfg = {});
    CMat value(double z) const;     // Q0(z)
    CMat deriv(double z) const;     // dQ0/dz
    cplx theta_den(double z) const; // theta([z+1]U - Kt)
    cplx theta_num(int j, int l, double z) const;
    const SpectralFrame& frame() const { return *fr_; }
    const CMat& nu() const { return nu_; }
    const CMat& prime_form() const { return E_; }
    const PrimeFormFrame& prime_frame() const { return pframe_; }

  private:
    std::shared_ptr<const SpectralFrame> fr_;
    PrimeFormFrame pframe_;
    CMat E_, nu_, pref_;
    std::vector<std::unique_ptr<ThetaLine>> lines_; // n*n numerators + denominator
    int idx(int j, int l) const { return j * fr_->n + l; }
};

struct Q0Grid {
    std::vector<double> z_nodes;
    std::vector<CMat> values;
    CVec rho;
    CMat nu_diff;
    std::vector<bool> pole_flag;
};
Q0Grid charge3_q0(const ESData& es, const PeriodData& pd, const std::vector<int>& eps_signs,
                  const std::vector<double>& grid, const ToleranceConfig& cfg = {});

// scan of the theta denominator (and the numerator shifts) over s = z+1 in [0,2]
struct ThetaZero {
    double s;          // location in [0,2]
    double den_mag;    // |theta| at the refined zero
    double num_mag;    // smallest numerator |theta| there
};
std::vector<ThetaZero> zero_scan(const ESData& es, const PeriodData& pd, int samples = 2001,
                                 const ToleranceConfig& cfg = {});

struct NahmSample {
    std::vector<double> z_nodes;
    std::vector<CMat> T1, T2, T3;
    std::vector<double> nahm_residual;   // max |T_i' - [T_j, T_k]|
    std::vector<double> antiherm_residual;
    std::vector<double> lax_residual;    // max over components of dA/dz - [A, M]
};

// charge-2 closed forms: f1 = K dn/cn, f2 = K k' sn/cn, f3 = K k'/cn at K z
std::array<double, 3> charge2_f(double k, double z);
cplx charge2_q0_theta(double k, double z, const ToleranceConfig& cfg = {});
NahmSample charge2_nahm(double k, const std::vector<double>& grid,
                        const ToleranceConfig& cfg = {});

// generic gauge flow: dC/dz = 1/2 C Q0, A0 = C Q0 C^{-1}, A1 = C diag(rho) C^{-1},
// A_{-1} = -A1^dagger, T1 = (A1 + A_{-1})/2, T2 = (A_{-1} - A1)/(2i), T3 = (i/2) A0
NahmSample solve_gauge_flow(const Q0Assembly& q0, const std::vector<double>& grid,
                            const ToleranceConfig& cfg = {});

// coefficients of det(eta I - (A_{-1}/zeta + A0 + A1 zeta)) * zeta^n in (eta, zeta):
// returns the eta^1 coefficients (e2, degree 2n in zeta) and the eta^0
// coefficients (det, degree 2n), lowest order first
struct SpectralCoeffs {
    std::vector<cplx> e2;   // length 2n+1
    std::vector<cplx> det;  // length 2n+1
    std::vector<cplx> tr;   // length 2n+1 (eta^2 coefficient for n=3)
};
SpectralCoeffs spectral_coeffs(const CMat& T1, const CMat& T2, const CMat& T3);

} // namespace monoct

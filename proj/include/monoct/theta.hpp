#pragma once

#include "monoct/rational.hpp"
#include "monoct/types.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace monoct {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

// rational theta characteristic [a; b]
struct ThetaCharacteristic {
    RationalVec a, b;

    int genus() const { return int(a.size()); }
    RVec a_real() const;
    RVec b_real() const;
    static ThetaCharacteristic half(const std::vector<int>& top, const std::vector<int>& bottom);
    static ThetaCharacteristic zero(int g);
};

enum class Parity { Even, Odd };
Parity char_parity(const ThetaCharacteristic& ch);

// Riemann period matrix: symmetric with positive definite imaginary part
struct PeriodMatrixTau {
    CMat tau;

    int genus() const { return int(tau.rows()); }
    // smallest eigenvalue of Im tau; throws if below 1e-8
    double check_conditioning() const;
};

// integer symplectic 2g x 2g matrix, blocks [[A,B],[C,D]]
struct SymplecticTransform {
    IMat m; // 2g x 2g

    int genus() const { return int(m.rows()) / 2; }
    IMat blockA() const;
    IMat blockB() const;
    IMat blockC() const;
    IMat blockD() const;
    bool is_symplectic() const; // sigma J sigma^T == J exactly
    static SymplecticTransform identity(int g);
};

// theta with characteristics; deriv holds <=2 direction vectors for
// termwise-differentiated lattice sums
cplx theta(const CVec& z, const PeriodMatrixTau& tau, const ThetaCharacteristic& ch,
           const std::vector<CVec>& deriv = {}, const ToleranceConfig& cfg = {});

// canonical theta (zero characteristic)
cplx theta0(const CVec& z, const PeriodMatrixTau& tau, const std::vector<CVec>& deriv = {},
            const ToleranceConfig& cfg = {});

// Jacobi theta_i, i=1..4, unit periods: theta3(z) = sum q^{n^2} e^{2 pi i n z}
cplx jacobi_theta(int i, cplx z, cplx tau, const ToleranceConfig& cfg = {});
cplx jacobi_theta_dz(int i, cplx z, cplx tau, const ToleranceConfig& cfg = {});

struct CharTransformResult {
    ThetaCharacteristic transformed;
    Rational phase; // phi_{a,b}(g); theta transform carries exp(2 pi i phase)
};
CharTransformResult modular_transform_char(const ThetaCharacteristic& ch,
                                           const SymplecticTransform& g);

// evaluates theta(w0 + t*w1; tau) for many real t over a fixed lattice set;
// built once, then O(lattice) per call
class ThetaLine {
  public:
    ThetaLine(const CVec& w0, const CVec& w1, const PeriodMatrixTau& tau, double t_lo,
              double t_hi, const ToleranceConfig& cfg = {});
    cplx value(double t) const;
    cplx deriv(double t) const; // d/dt
    size_t terms() const { return c_.size(); }

  private:
    std::vector<cplx> c_, d_;
};

// theta((z,w); tau') for a reduced period matrix
//   tau' = [[tau1, Q],[Q^T, tau#]], Q rational (g1 x (g-g1)),
// as the finite sum of products of genus-g1 and genus-(g-g1) thetas.
cplx theta_reduce(const CVec& z_head, const CVec& w_tail, const PeriodMatrixTau& tau_reduced,
                  int g1, const ToleranceConfig& cfg = {});

// helpers shared with the curve layer
struct LatticePoint {
    IVec n;
};
std::vector<RVec> lattice_ellipsoid(const RMat& Y, const RVec& center, double radius2);

} // namespace monoct

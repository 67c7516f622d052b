#pragma once

#include "monoct/es.hpp"
#include "monoct/theta.hpp"

namespace monoct {

struct ReducedForm {
    SymplecticTransform sigma;     // sends the winding data to (1/2, 0, 0, 0)
    PeriodMatrixTau tau_prime;     // sigma acting on tau
    long long d = 0;               // Hopf number
    long long alpha_entry = 0;     // tau'_{12} = alpha / d
    long long beta_entry = 0;      // tau'_{11} = (beta - rho)/d, beta reduced mod |d|
};

// Moebius action (A tau + B)(C tau + D)^{-1}
PeriodMatrixTau act_on_tau(const SymplecticTransform& sigma, const PeriodMatrixTau& tau);

// deterministic integer symplectic reduction: brings the winding vector to
// (1/2,0,0,0) exactly and the period matrix to first-row support {1,2}
ReducedForm reduce(const PeriodMatrixTau& tau, const ESData& es,
                   const ToleranceConfig& cfg = {});

// alpha = gcd(m1 + 4 n1 - q(m1 - 2 n1), n1 - 2 m1 - p(m1 - 2 n1)) minimized
// over the Bezout orbit p m1 + q n1 = 1
long long alpha_gcd(long long n1, long long m1);

// transform the row (n, m) by sigma^{-1}
IVec transform_winding(const IVec& n, const IVec& m, const SymplecticTransform& sigma);

} // namespace monoct

#pragma once

#include "monoct/types.hpp"

#include <array>

namespace monoct {

// Gauss hypergeometric 2F1(a,b;c;z), principal branch, cut along [1,inf).
// Direct series inside |z|<0.6, Pfaff mapping and the z->1-z connection
// formulas elsewhere; Taylor recentering along a path for the remaining
// lens region.  Parameters with c a non-positive integer are rejected.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const ToleranceConfig& cfg = {});

// Gamma function (Lanczos g=7 with reflection).
cplx gamma_c(cplx z);
double log_gamma_real(double x);

// complete elliptic integral K(k), 0 <= k < 1, by AGM
double elliptic_K(double k);

// Jacobi elliptic functions by descending Landen transformation
struct JacobiSCD {
    double sn, cn, dn;
};
JacobiSCD jacobi_sn_cn_dn(double u, double k);

// digamma for the logarithmic 2F1 connection (real and complex arguments)
cplx digamma_c(cplx z);

} // namespace monoct

#pragma once

#include "monoct/curve.hpp"

#include <optional>

namespace monoct {

// winding data and the solved curve parameters
struct ESData {
    long long n1 = 0, m1 = 0;
    IVec n, m;    // length-4 integer vectors
    long long d = 0; // Hopf number 2(n1+m1)(m1-2n1)
    double t = 0.5;
    double b = 0.0;
    double alpha = 1.0;
    double chi = 0.0;
    double chi_cuberoot = 0.0;
    double xi = 0.0;
};

bool admissible(long long n1, long long m1);
std::pair<IVec, IVec> extend_vectors(long long n1, long long m1);

// the hypergeometric ratio f(t) = 2F1(1/3,2/3;1;t)/2F1(1/3,2/3;1;1-t)
double es_ratio(double t, const ToleranceConfig& cfg = {});

// unique t in (0,1) with f(t) = (2 n1 - m1)/(m1 + n1)
double solve_t(long long n1, long long m1, const ToleranceConfig& cfg = {});

// closed forms for the tabulated ratios {1/2, 1, 2, 3, 4}
std::optional<double> ramanujan_t(long long n1, long long m1);

ESData curve_from_t(long long n1, long long m1, double t, const ToleranceConfig& cfg = {});
ESData solve_es(long long n1, long long m1, const ToleranceConfig& cfg = {});

struct ESResidual {
    double constraint; // || n^T A + m^T B - 6 chi^{1/3} e1 ||_max
    double x_form;     // || x - xi (H n + rho^2 m) ||_max
};
ESResidual verify_es(const PeriodData& pd, const ESData& es);

} // namespace monoct

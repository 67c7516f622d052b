#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace monoct {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// exp(2*i*pi/3), the deck rotation of the trigonal curve
inline cplx cube_root_unity() { return cplx(-0.5, 0.8660254037844386467637231707529362); }

struct ToleranceConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int    max_terms = 100000;
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};
struct DomainError : NumericError {
    explicit DomainError(const std::string& what) : NumericError(what) {}
};
struct ConvergenceError : NumericError {
    explicit ConvergenceError(const std::string& what) : NumericError(what) {}
};

} // namespace monoct

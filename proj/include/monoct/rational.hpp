#pragma once

#include "monoct/types.hpp"

#include <numeric>
#include <vector>

namespace monoct {

// exact rational on int64, normalized with positive denominator
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw NumericError("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    double value() const { return double(num) / double(den); }
    bool is_integer() const { return den == 1; }

    friend Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend Rational operator-(Rational a) { return Rational(-a.num, a.den); }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

using RationalVec = std::vector<Rational>;

// fractional part in [0,1)
inline Rational frac_mod1(Rational a) {
    long long q = a.num / a.den;
    long long r = a.num - q * a.den;
    if (r < 0) r += a.den;
    return Rational(r, a.den);
}

// exp(2*pi*i*r) from the exact rational, avoiding drift
inline cplx expi2pi(Rational r) {
    Rational f = frac_mod1(r);
    double ang = 2.0 * kPi * double(f.num) / double(f.den);
    return cplx(std::cos(ang), std::sin(ang));
}

} // namespace monoct

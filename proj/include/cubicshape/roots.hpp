#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace cubicshape {

using LComplex = std::complex<long double>;

// Roots of a t^3 + b t^2 + c t + d (a != 0), closed form then Newton polish
// in long double. disc_sign > 0: three real roots, ascending.
// disc_sign < 0: roots[0] real, roots[1] upper half plane, roots[2] its conjugate.
inline std::array<LComplex, 3> cubic_roots(long double a, long double b, long double c, long double d, int disc_sign)
{
    if (a == 0)
        throw RootFindingFailure("leading coefficient is zero");
    if (disc_sign == 0)
        throw RootFindingFailure("repeated roots");
    const long double B = b / a, C = c / a, D = d / a;
    const long double p = C - B * B / 3;
    const long double q = 2 * B * B * B / 27 - B * C / 3 + D;
    const long double pi = 3.141592653589793238462643383279502884L;
    std::array<LComplex, 3> r;

    auto poly = [&](LComplex x) { return ((a * x + b) * x + c) * x + d; };
    auto dpoly = [&](LComplex x) { return (3 * a * x + 2 * b) * x + c; };
    auto polish = [&](LComplex x) {
        for (int it = 0; it < 6; ++it) {
            LComplex fx = poly(x), dfx = dpoly(x);
            if (dfx == LComplex(0))
                break;
            LComplex step = fx / dfx;
            x -= step;
            if (std::abs(step) <= 1e-19L * std::max(1.0L, std::abs(x)))
                break;
        }
        return x;
    };

    if (disc_sign > 0) {
        if (!(p < 0))
            throw RootFindingFailure("three real roots expected");
        const long double m = 2 * std::sqrt(-p / 3);
        long double arg = 3 * q / (p * m);
        arg = std::max(-1.0L, std::min(1.0L, arg));
        const long double phi = std::acos(arg) / 3;
        for (int k = 0; k < 3; ++k) {
            long double t = m * std::cos(phi - 2 * pi * k / 3) - B / 3;
            LComplex x = polish(LComplex(t, 0));
            r[k] = LComplex(x.real(), 0);
        }
        std::sort(r.begin(), r.end(), [](const LComplex& u, const LComplex& v) { return u.real() < v.real(); });
        return r;
    }

    const long double delta = q * q / 4 + p * p * p / 27;
    const long double sq = std::sqrt(std::max(delta, 0.0L));
    const long double s = q >= 0 ? 1 : -1;
    const long double A = -s * std::cbrt(std::fabs(q) / 2 + sq);
    const long double Bv = A != 0 ? -p / (3 * A) : 0;
    const long double rt = A + Bv - B / 3;
    LComplex x0 = polish(LComplex(rt, 0));
    r[0] = LComplex(x0.real(), 0);
    LComplex z(-(A + Bv) / 2 - B / 3, std::sqrt(3.0L) / 2 * std::fabs(A - Bv));
    z = polish(z);
    if (z.imag() < 0)
        z = std::conj(z);
    r[1] = z;
    r[2] = std::conj(z);
    return r;
}

} // namespace cubicshape

#pragma once

// Quadrature checks of the Mellin-transform identities used by the
// Eisenstein machinery. Left sides are numerical integrals on fixed grids,
// right sides closed forms.

#include <cmath>
#include <cstdio>
#include <complex>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "specialfun.hpp"

namespace cubicshape {

// int_0^inf K_nu(x) x^{s-1} dx, via x = e^u
inline Complex mellin_bessel_k_quadrature(Complex nu, Complex s)
{
    if (!(s.real() > std::abs(nu.real())))
        throw std::domain_error("Mellin transform of K_nu needs Re s > |Re nu|");
    const double lo = -60.0 / (s.real() - std::abs(nu.real()));
    const double hi = std::log(80.0);
    auto f = [&](double u) { return bessel_k(nu, std::exp(u)) * std::exp(s * u); };
    return integrate_doubling(f, lo, hi, 1e-12, 0.0, 16);
}

inline Complex mellin_bessel_k_closed(Complex nu, Complex s)
{
    return std::pow(Complex(2.0), s - 2.0) * gamma_fn((s + nu) / 2.0) * gamma_fn((s - nu) / 2.0);
}

// int_0^inf cos(x) x^{s-1} dx for 0 < Re s < 1, regularized by an
// asymptotic tail past A.
inline Complex cosine_mellin_quadrature(Complex s)
{
    if (!(s.real() > 0.0 && s.real() < 1.0))
        throw std::domain_error("cosine Mellin transform needs 0 < Re s < 1");
    // [0, 1] with x = u^m so the endpoint power becomes regular
    const int m = static_cast<int>(std::ceil(2.0 / s.real()));
    auto head = [&](double u) {
        if (u == 0.0)
            return Complex(0.0);
        return double(m) * std::cos(std::pow(u, m)) * std::exp((double(m) * s - 1.0) * std::log(u));
    };
    Complex I0 = integrate_doubling(head, 0.0, 1.0, 1e-13, 0.0, 8);
    const double A = 100.0;
    auto body = [&](double x) { return std::cos(x) * std::exp((s - 1.0) * std::log(x)); };
    Complex I1 = integrate_doubling(body, 1.0, A, 1e-13, 0.0, 64);
    // int_A^inf e^{+-ix} g(x) dx = e^{+-iA} sum_k (+-i)^{k+1} g^{(k)}(A), g = x^{s-1}
    Complex plus = 0.0, minus = 0.0;
    Complex deriv = std::exp((s - 1.0) * std::log(A));
    Complex ip = Complex(0, 1), im = Complex(0, -1);
    for (int k = 0; k < 40; ++k) {
        plus += ip * deriv;
        minus += im * deriv;
        ip *= Complex(0, 1);
        im *= Complex(0, -1);
        deriv *= (s - 1.0 - double(k)) / A;
    }
    Complex tail = 0.5 * (std::exp(Complex(0, A)) * plus + std::exp(Complex(0, -A)) * minus);
    return I0 + I1 + tail;
}

inline Complex cosine_mellin_closed(Complex s) { return gamma_fn(s) * std::cos(kPi * s / 2.0); }

// int_0^inf exp(-t^2 - 1/t^2) t^{s-1} dt, via t = e^u
inline Complex k_at_two_quadrature(Complex s)
{
    auto f = [&](double u) { return std::exp(-2.0 * std::cosh(2.0 * u)) * std::exp(s * u); };
    return integrate_doubling(f, -4.5, 4.5, 1e-13, 0.0, 8);
}

// int_0^inf dt/t t^z int_R du exp(-t^2 - 1/t^2 - u^2), both integrals numerical
inline Complex gaussian_eigenvalue_quadrature(Complex z)
{
    auto inner = [](double) {
        auto g = [](double u) { return std::exp(-u * u); };
        return integrate_panels(g, -9.0, 9.0, 12, gauss32());
    };
    auto f = [&](double u) { return inner(u) * std::exp(-2.0 * std::cosh(2.0 * u)) * std::exp(z * u); };
    return integrate_doubling(f, -4.5, 4.5, 1e-13, 0.0, 8);
}

inline Complex gaussian_eigenvalue_closed(Complex z) { return std::sqrt(kPi) * bessel_k(z / 2.0, 2.0); }

struct IdentityCheck {
    std::string name;
    std::string point;
    Complex lhs;
    Complex rhs;
    double residual = 0.0; // relative
    double tol = 0.0;
    bool pass = false;
};

inline std::string format_complex(Complex v)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", v.real(), v.imag());
    return buf;
}

inline IdentityCheck make_check(std::string name, std::string point, Complex lhs, Complex rhs, double tol)
{
    IdentityCheck c{std::move(name), std::move(point), lhs, rhs};
    c.residual = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    c.tol = tol;
    c.pass = c.residual < tol;
    return c;
}

inline std::vector<IdentityCheck> identity_suite()
{
    std::vector<IdentityCheck> out;
    for (Complex s : {Complex(2, 0), Complex(3, 1)})
        for (Complex nu : {Complex(0, 0), Complex(0.5, 0), Complex(0, 1)})
            out.push_back(make_check("bessel_k_mellin", "s=" + format_complex(s) + " nu=" + format_complex(nu),
                                     mellin_bessel_k_quadrature(nu, s), mellin_bessel_k_closed(nu, s), 1e-6));
    for (Complex s : {Complex(0.25, 0), Complex(0.5, 0), Complex(0.75, 0), Complex(0.5, 2)})
        out.push_back(make_check("cosine_mellin", "s=" + format_complex(s), cosine_mellin_quadrature(s),
                                 cosine_mellin_closed(s), 1e-6));
    for (Complex s : {Complex(1, 0), Complex(2, 0), Complex(1, 1)})
        out.push_back(make_check("k_at_two", "s=" + format_complex(s), k_at_two_quadrature(s),
                                 bessel_k(s / 2.0, 2.0), 1e-8));
    for (Complex z : {Complex(0.5, 0), Complex(0, 1), Complex(1, 1)})
        out.push_back(make_check("gaussian_eigenvalue", "z=" + format_complex(z), gaussian_eigenvalue_quadrature(z),
                                 gaussian_eigenvalue_closed(z), 1e-8));
    return out;
}

} // namespace cubicshape

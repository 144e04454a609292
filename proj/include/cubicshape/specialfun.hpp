#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include "arith.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace cubicshape {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Spectral parameter of the Eisenstein series; r is meaningful when z = i r.
struct SpectralParams {
    Complex z{0.0, 1.0};
    double r = 1.0;
    int truncation_terms = 10000;
    double tol = 1e-12;

    static SpectralParams on_line(double r, double tol = 1e-12)
    {
        SpectralParams p;
        p.z = Complex(0.0, r);
        p.r = r;
        p.tol = tol;
        return p;
    }

    void validate() const
    {
        auto near = [](Complex w, double v) { return std::abs(w - Complex(v, 0.0)) == 0.0; };
        if (near(z, 0.0) || near(z, 1.0) || near(z, -1.0))
            throw PoleError("spectral parameter sits on a pole of the xi ratio");
        if (!(tol > 0.0))
            throw std::invalid_argument("tol must be positive");
        if (truncation_terms < 1)
            throw std::invalid_argument("truncation_terms must be >= 1");
    }
};

namespace detail {

inline bool is_nonpositive_integer(Complex s)
{
    return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// Lanczos, g = 7, n = 9.
inline Complex gamma_right(Complex s)
{
    static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double g = 7.0;
    Complex w = s - 1.0;
    Complex acc = c[0];
    for (int i = 1; i < 9; ++i)
        acc += c[i] / (w + double(i));
    Complex t = w + g + 0.5;
    return std::sqrt(2.0 * kPi) * std::exp((w + 0.5) * std::log(t) - t) * acc;
}

// B_{2k} / (2k)!, k = 1..20
inline const long double* bernoulli_over_factorial()
{
    static const long double table[20] = {
        1.0L / 6 / 2,
        -1.0L / 30 / 24,
        1.0L / 42 / 720,
        -1.0L / 30 / 40320,
        5.0L / 66 / 3628800,
        -691.0L / 2730 / 479001600,
        7.0L / 6 / 87178291200.0L,
        -3617.0L / 510 / 20922789888000.0L,
        43867.0L / 798 / 6402373705728000.0L,
        -174611.0L / 330 / 2432902008176640000.0L,
        854513.0L / 138 / 1.1240007277776077e21L,
        -236364091.0L / 2730 / 6.2044840173323941e23L,
        8553103.0L / 6 / 4.0329146112660565e26L,
        -23749461029.0L / 870 / 3.0488834461171386e29L,
        8615841276005.0L / 14322 / 2.6525285981219105e32L,
        -7709321041217.0L / 510 / 2.6313083693369353e35L,
        2577687858367.0L / 6 / 2.9523279903960414e38L,
        -26315271553053477373.0L / 1919190 / 3.7199332678990125e41L,
        2929993913841559.0L / 6 / 5.2302261746660111e44L,
        -261082718496449122051.0L / 13530 / 8.1591528324789774e47L,
    };
    return table;
}

// Euler-Maclaurin with N = 30 + ceil|s| terms and up to 20 Bernoulli corrections.
inline Complex zeta_em(Complex s)
{
    const int N = 30 + static_cast<int>(std::ceil(std::abs(s)));
    Complex sum = 0.0;
    for (int n = N - 1; n >= 1; --n)
        sum += std::exp(-s * std::log(double(n)));
    const double lnN = std::log(double(N));
    Complex Ns = std::exp(-s * lnN); // N^{-s}
    sum += Ns * double(N) / (s - 1.0) + 0.5 * Ns;
    const long double* B = bernoulli_over_factorial();
    Complex rising = s;           // s (s+1) ... (s+2k-2)
    Complex pw = Ns / double(N);  // N^{-s-1}
    for (int k = 1; k <= 20; ++k) {
        Complex term = double(B[k - 1]) * rising * pw;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        pw /= double(N) * double(N);
    }
    return sum;
}

} // namespace detail

// Gamma function (named to stay clear of glibc's ::gamma); Lanczos on Re s >= 1/2, reflection below.
inline Complex gamma_fn(Complex s)
{
    if (detail::is_nonpositive_integer(s))
        throw PoleError("gamma has a pole at a non-positive integer");
    if (s.real() >= 0.5)
        return detail::gamma_right(s);
    return kPi / (std::sin(kPi * s) * detail::gamma_right(1.0 - s));
}

// Riemann zeta. Euler-Maclaurin on Re s >= 0; left of that the direct sum
// cancels badly (terms grow like N^{1 - Re s}), so reflect.
inline Complex zeta(Complex s)
{
    if (s == Complex(1.0, 0.0))
        throw PoleError("zeta has a pole at s = 1");
    if (s.real() >= 0.0)
        return detail::zeta_em(s);
    if (s.imag() == 0.0 && s.real() == std::floor(s.real()) && std::fmod(s.real(), 2.0) == 0.0)
        return 0.0;
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    return std::pow(Complex(2.0), s) * std::pow(Complex(kPi), s - 1.0) * std::sin(kPi * s / 2.0) *
           gamma_fn(1.0 - s) * detail::zeta_em(1.0 - s);
}

// Completed zeta pi^{-s/2} Gamma(s/2) zeta(s).
inline Complex xi(Complex s)
{
    if (s == Complex(0.0, 0.0) || s == Complex(1.0, 0.0))
        throw PoleError("xi has poles at s = 0 and s = 1");
    // trivial zeros of zeta cancel the Gamma poles; evaluate at 1 - s there
    bool at_trivial_zero = s.imag() == 0.0 && s.real() < 0.0 && s.real() == std::floor(s.real()) &&
                           std::fmod(s.real(), 2.0) == 0.0;
    if (at_trivial_zero || s.real() < -5.0)
        s = 1.0 - s;
    return std::exp(-s / 2.0 * std::log(kPi)) * gamma_fn(s / 2.0) * zeta(s);
}

struct BesselResult {
    Complex value;
    bool underflow = false;
};

// e^x K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt, for x > 0.
inline Complex bessel_k_scaled(Complex nu, double x, double rel_tol = 1e-14)
{
    if (!(x > 0.0))
        throw std::domain_error("bessel_k needs x > 0");
    if (std::abs(nu.real()) > 10.0)
        throw Unsupported("bessel_k supports |Re nu| <= 10");
    const double a = std::abs(nu.real());
    const double target = std::log(1.0 / rel_tol) + 8.0;
    // peak of -x (cosh t - 1) + a t sits where x sinh t = a
    const double tpeak = a > 0.0 ? std::asinh(a / x) : 0.0;
    const double peak = -2.0 * x * std::pow(std::sinh(tpeak / 2.0), 2) + a * tpeak;
    double T = std::max(1.0, 2.0 * tpeak);
    auto exponent = [&](double t) { return -2.0 * x * std::pow(std::sinh(t / 2.0), 2) + a * t; };
    while (peak - exponent(T) < target)
        T *= 1.25;

    if (nu.imag() == 0.0) {
        const double v = nu.real();
        auto f = [&](double t) { return std::exp(-2.0 * x * std::pow(std::sinh(t / 2.0), 2)) * std::cosh(v * t); };
        return integrate_doubling(f, 0.0, T, rel_tol, 0.0, 2);
    }
    if (nu.real() == 0.0) {
        const double b = nu.imag();
        auto f = [&](double t) { return std::exp(-2.0 * x * std::pow(std::sinh(t / 2.0), 2)) * std::cos(b * t); };
        // the integral of |integrand| bounds the attainable relative accuracy
        auto g = [&](double t) { return std::exp(-2.0 * x * std::pow(std::sinh(t / 2.0), 2)); };
        double floor = integrate_panels(g, 0.0, T, 2) * 1e-3;
        return integrate_doubling(f, 0.0, T, rel_tol, floor, 2);
    }
    auto f = [&](double t) { return std::exp(-2.0 * x * std::pow(std::sinh(t / 2.0), 2)) * std::cosh(nu * t); };
    auto g = [&](double t) { return std::exp(-2.0 * x * std::pow(std::sinh(t / 2.0), 2)) * std::cosh(a * t); };
    double floor = integrate_panels(g, 0.0, T, 2) * 1e-3;
    return integrate_doubling(f, 0.0, T, rel_tol, floor, 2);
}

inline BesselResult bessel_k_checked(Complex nu, double x, double rel_tol = 1e-14)
{
    if (x > 700.0)
        return {Complex(0.0, 0.0), true};
    return {bessel_k_scaled(nu, x, rel_tol) * std::exp(-x), false};
}

// Modified Bessel function of the second kind; exact 0 past the exponent range
// (see bessel_k_checked for the flag).
inline Complex bessel_k(Complex nu, double x) { return bessel_k_checked(nu, x).value; }

// sum over ab = m of (a/b)^s
inline Complex eta_divisor(Complex s, std::uint64_t m)
{
    if (m == 0)
        throw std::domain_error("eta_divisor needs m >= 1");
    Complex sum = 0.0;
    for (std::uint64_t a = 1; a * a <= m; ++a) {
        if (m % a)
            continue;
        std::uint64_t b = m / a;
        double l = std::log(double(a) / double(b));
        if (a == b)
            sum += 1.0;
        else
            sum += std::exp(s * l) + std::exp(-s * l);
    }
    return sum;
}

struct EulerProduct {
    Complex value;
    double tail_bound = 0.0; // bound on |full product - value|
    std::uint32_t prime_bound = 0;
};

// prod_{p <= P} (1 - p^{-(5+z)/3} - p^{-(7+2z)/3} + p^{-(13+2z)/3})
inline EulerProduct euler_product_main_term(Complex z, std::uint32_t prime_bound)
{
    if (prime_bound < 2)
        throw std::invalid_argument("prime_bound must be >= 2");
    const Complex e1 = (5.0 + z) / 3.0, e2 = (7.0 + 2.0 * z) / 3.0, e3 = (13.0 + 2.0 * z) / 3.0;
    const double sigma = e1.real();
    if (sigma <= 1.0 || e2.real() <= 1.0)
        throw DivergenceError("Euler product diverges for Re z <= -2");
    Complex logsum = 0.0;
    for (std::uint32_t p : primes_up_to(prime_bound)) {
        const double lp = std::log(double(p));
        Complex f = 1.0 - std::exp(-e1 * lp) - std::exp(-e2 * lp) + std::exp(-e3 * lp);
        logsum += std::log(f);
    }
    EulerProduct out;
    out.value = std::exp(logsum);
    out.prime_bound = prime_bound;
    // tail: |log(1-x)| <= 1.5|x| when |x| <= 1/3, and
    // sum_{p>P} p^{-sigma} <= 1.25506 sigma P^{1-sigma} / ((sigma-1) ln P)
    const double P = double(prime_bound);
    const double d1 = e2.real() - sigma, d2 = e3.real() - sigma;
    const double spread = 1.0 + std::pow(P, -d1) + std::pow(P, -d2);
    const double xmax = spread * std::pow(P, -sigma);
    double L;
    if (xmax <= 1.0 / 3.0)
        L = 1.5 * spread * 1.25506 * sigma * std::pow(P, 1.0 - sigma) / ((sigma - 1.0) * std::log(P));
    else
        L = std::numeric_limits<double>::infinity();
    out.tail_bound = std::abs(out.value) * std::expm1(L);
    return out;
}

} // namespace cubicshape

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "shapes.hpp"
#include "specialfun.hpp"

namespace cubicshape {

struct EisensteinEvaluation {
    Complex z;
    Complex tau;           // reduced point actually used
    Complex value;
    Complex constant_term; // t^{1+z} + t^{1-z} xi(z)/xi(1+z)
    double tail_bound = 0; // bound on the dropped Fourier terms
    int terms = 0;
};

inline constexpr int kMaxFourierTerms = 10000;

namespace detail {

inline void check_eisenstein_parameter(Complex z)
{
    for (double p : {0.0, 1.0, -1.0})
        if (z == Complex(p, 0.0))
            throw PoleError("E(z, tau) is not defined at z = 0, 1, -1");
}

// Upper bound for |K_nu(x)| with sigma = |Re nu|, and e^x times it is
// nonincreasing in x (both follow from the cosh integral).
inline double bessel_k_envelope(double sigma, double x)
{
    if (sigma <= 0.5)
        return std::sqrt(kPi / (2.0 * x)) * std::exp(-x); // K_{1/2}, K_sigma increasing in sigma
    return bessel_k(Complex(sigma, 0.0), x).real();
}

// Bound for sum_{m > M} |eta(m)| |K(2 pi m y)| with |eta(m)| <= 2 sqrt(m) m^{e0},
// using K(x + h) <= K(x) e^{-h}.
inline double fourier_tail(int M, double y, double sigma, double e0)
{
    const double x = 2.0 * kPi * (M + 1) * y;
    if (x > 745.0)
        return 0.0;
    const double p = 0.5 + e0;
    const double q = std::exp(-2.0 * kPi * y);
    const double ratio = std::pow(2.0, p) * q;
    if (ratio >= 1.0)
        return std::numeric_limits<double>::infinity();
    const double first = 2.0 * std::pow(double(M + 1), p) * bessel_k_envelope(sigma, x);
    return first / (1.0 - ratio);
}

// Reduce into the SL2 domain, then use the symmetry tau -> -conj(tau).
inline Complex reduce_for_eisenstein(Complex tau)
{
    auto r = reduce_to_fundamental(tau).first;
    if (r.real() < 0)
        r = -std::conj(r);
    return r;
}

// Fourier development with K supplied by `kfun(m, x)` and eta by `eta(m)`.
template <class KFun, class EtaFun>
EisensteinEvaluation fourier_sum(Complex z, Complex tau0, double tol, Complex xi_ratio, Complex inv_xi1, KFun&& kfun,
                                 EtaFun&& eta)
{
    if (!(tol > 0))
        throw std::invalid_argument("tol must be positive");
    EisensteinEvaluation out;
    out.z = z;
    out.tau = reduce_for_eisenstein(tau0);
    const double y = out.tau.imag(), u = out.tau.real();
    const double t = std::sqrt(y);
    const double logt = std::log(t);
    out.constant_term = std::exp((1.0 + z) * logt) + std::exp((1.0 - z) * logt) * xi_ratio;

    const double sigma = std::abs(z.real()) / 2.0;
    const Complex pref = 4.0 * t * inv_xi1;
    const double scale = std::abs(pref);
    Complex acc = 0.0;
    for (int m = 1; m <= kMaxFourierTerms; ++m) {
        const double x = 2.0 * kPi * m * y;
        if (x <= 745.0)
            acc += eta(m) * kfun(m, x) * std::cos(2.0 * kPi * m * u);
        double tail = scale * fourier_tail(m, y, sigma, sigma);
        if (tail < tol) {
            out.terms = m;
            out.tail_bound = tail;
            out.value = out.constant_term + pref * acc;
            return out;
        }
    }
    throw NonConvergence("Fourier tail above tolerance after 10^4 terms");
}

// Piecewise Chebyshev fit of e^x K_nu(x) on [lo, hi].
class ScaledBesselTable {
public:
    ScaledBesselTable(Complex nu, double lo, double hi, double width = 1.0, int degree = 16)
        : lo_(lo), width_(width), degree_(degree)
    {
        const int panels = static_cast<int>(std::ceil((hi - lo) / width));
        hi_ = lo + panels * width;
        coef_.resize(static_cast<std::size_t>(panels) * (degree + 1));
        const int n = degree + 1;
        std::vector<Complex> f(n);
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * width, half = width / 2;
            for (int j = 0; j < n; ++j)
                f[j] = bessel_k_scaled(nu, mid + half * std::cos(kPi * (j + 0.5) / n));
            for (int k = 0; k < n; ++k) {
                Complex c = 0;
                for (int j = 0; j < n; ++j)
                    c += f[j] * std::cos(kPi * k * (j + 0.5) / n);
                coef_[static_cast<std::size_t>(p) * n + k] = c * (2.0 / n);
            }
        }
    }

    bool covers(double x) const { return x >= lo_ && x < hi_; }

    Complex scaled(double x) const
    {
        const int n = degree_ + 1;
        const int p = static_cast<int>((x - lo_) / width_);
        const double s = (x - (lo_ + (p + 0.5) * width_)) / (width_ / 2);
        const Complex* c = &coef_[static_cast<std::size_t>(p) * n];
        Complex b1 = 0, b2 = 0;
        for (int k = n - 1; k >= 1; --k) {
            Complex b0 = 2.0 * s * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return s * b1 - b2 + c[0] / 2.0;
    }

private:
    double lo_, hi_, width_;
    int degree_;
    std::vector<Complex> coef_;
};

} // namespace detail

// E(z, tau) by its Fourier development; tau is reduced first.
inline EisensteinEvaluation eisenstein(Complex z, Complex tau, double tol)
{
    detail::check_eisenstein_parameter(z);
    const Complex xi1 = xi(1.0 + z);
    const Complex ratio = xi(z) / xi1;
    return detail::fourier_sum(
        z, tau, tol, ratio, 1.0 / xi1, [&](int, double x) { return bessel_k(z / 2.0, x); },
        [&](int m) { return eta_divisor(z / 2.0, static_cast<std::uint64_t>(m)); });
}

// Repeated evaluation at one z: eta values and e^x K_{z/2}(x) are tabulated
// once. Immutable after construction, so safe to share between threads.
class EisensteinSeries {
public:
    explicit EisensteinSeries(Complex z, double tol = 1e-12)
        : z_(z), tol_(tol), table_((detail::check_eisenstein_parameter(z), z / 2.0), kTableLo, kTableHi)
    {
        const Complex xi1 = xi(1.0 + z);
        ratio_ = xi(z) / xi1;
        inv_xi1_ = 1.0 / xi1;
        eta_.resize(kEtaCache + 1);
        for (int m = 1; m <= kEtaCache; ++m)
            eta_[m] = eta_divisor(z / 2.0, static_cast<std::uint64_t>(m));
    }

    Complex z() const { return z_; }
    double tol() const { return tol_; }

    EisensteinEvaluation evaluate(Complex tau) const
    {
        return detail::fourier_sum(
            z_, tau, tol_, ratio_, inv_xi1_,
            [&](int, double x) {
                if (table_.covers(x))
                    return table_.scaled(x) * std::exp(-x);
                return bessel_k(z_ / 2.0, x);
            },
            [&](int m) {
                if (m <= kEtaCache)
                    return eta_[m];
                return eta_divisor(z_ / 2.0, static_cast<std::uint64_t>(m));
            });
    }

    Complex operator()(Complex tau) const { return evaluate(tau).value; }

    // reduced tau has Im >= sqrt(3)/2, so every argument is >= 5.44
    static constexpr double kTableLo = 5.0;
    static constexpr double kTableHi = 160.0;
    static constexpr int kEtaCache = 256;

private:
    Complex z_;
    double tol_;
    detail::ScaledBesselTable table_;
    Complex ratio_, inv_xi1_;
    std::vector<Complex> eta_;
};

struct SpectralValue {
    Complex value;      // E(ir, tau)
    Complex normalized; // xi(1 + ir) E(ir, tau), real up to rounding
};

inline SpectralValue eisenstein_spectral(double r, const LatticeShape& s, double tol)
{
    if (r == 0.0)
        throw PoleError("spectral parameter r must be nonzero");
    const Complex z(0.0, r);
    auto e = eisenstein(z, s.tau, tol);
    return {e.value, xi(1.0 + z) * e.value};
}

} // namespace cubicshape

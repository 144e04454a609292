#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace cubicshape {

using Complex = std::complex<double>;

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Newton iteration on P_n from the Chebyshev guess, in long double.
inline GaussRule make_gauss_legendre(int n)
{
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const long double pi = 3.141592653589793238462643383279502884L;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-19L)
                break;
        }
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        long double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[i] = static_cast<double>(-x);
        r.nodes[n - 1 - i] = static_cast<double>(x);
        r.weights[i] = r.weights[n - 1 - i] = static_cast<double>(w);
    }
    return r;
}

inline const GaussRule& gauss16()
{
    static const GaussRule r = make_gauss_legendre(16);
    return r;
}

inline const GaussRule& gauss32()
{
    static const GaussRule r = make_gauss_legendre(32);
    return r;
}

// Composite rule with `panels` equal panels on [a, b].
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, const GaussRule& rule = gauss16())
    -> decltype(f(a))
{
    using R = decltype(f(a));
    R total{};
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h;
        const double mid = lo + 0.5 * h;
        R part{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            part += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += part * (0.5 * h);
    }
    return total;
}

template <class R>
double magnitude(const R& v)
{
    return std::abs(v);
}

// Doubles the panel count until two successive values agree to rel_tol
// (relative to max(|I|, abs_floor)). Returns the finer value.
template <class F>
auto integrate_doubling(F&& f, double a, double b, double rel_tol, double abs_floor = 0.0,
                        int start_panels = 4, int max_panels = 1 << 14,
                        const GaussRule& rule = gauss16()) -> decltype(f(a))
{
    auto prev = integrate_panels(f, a, b, start_panels, rule);
    for (int n = 2 * start_panels; n <= max_panels; n *= 2) {
        auto cur = integrate_panels(f, a, b, n, rule);
        double scale = std::max(magnitude(cur), abs_floor);
        if (magnitude(cur - prev) <= rel_tol * scale)
            return cur;
        prev = cur;
    }
    return prev;
}

} // namespace cubicshape

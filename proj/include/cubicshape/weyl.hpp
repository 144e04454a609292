#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <vector>

#include "cubicforms.hpp"
#include "eisenstein.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "shapes.hpp"
#include "specialfun.hpp"

namespace cubicshape {

// Bump exp(-1/(1-y^2)) rescaled to (lo, hi), optionally times `weight`.
struct TestFunction {
    double lo = 0.5, hi = 1.0;
    double weight = 1.0;

    void validate() const
    {
        if (!(lo > 0.0) || !(hi > lo))
            throw std::invalid_argument("test function support must satisfy 0 < lo < hi");
        if (!(weight > 0.0))
            throw std::invalid_argument("test function weight must be positive");
    }

    double operator()(double x) const
    {
        if (!(x > lo && x < hi))
            return 0.0;
        const double y = (2.0 * x - (lo + hi)) / (hi - lo);
        return weight * std::exp(-1.0 / (1.0 - y * y));
    }
};

// int_0^inf F(x) x^{s-1} dx
inline Complex mellin_F(const TestFunction& F, Complex s)
{
    F.validate();
    auto f = [&](double x) { return F(x) * std::exp((s - 1.0) * std::log(x)); };
    return integrate_doubling(f, F.lo, F.hi, 1e-13, 0.0, 4, 1 << 12, gauss32());
}

// A class together with its shape; only irreducible classes carry one.
struct ShapedClass {
    FormClass cls;
    LatticeShape shape;
};

inline bool is_cyclic_class(const FormClass& c) { return c.disc > 0 && is_square(c.disc); }

// Maximal non-cyclic classes (the S3 fields) with their shapes, in input order.
inline std::vector<ShapedClass> s3_field_shapes(const std::vector<FormClass>& classes, unsigned workers = 1)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].maximal && !classes[i].reducible && !is_cyclic_class(classes[i]))
            keep.push_back(i);
    std::vector<ShapedClass> out(keep.size());
    const std::size_t chunk = 4096;
    parallel_tasks((keep.size() + chunk - 1) / chunk, workers, [&](std::size_t t) {
        for (std::size_t k = t * chunk; k < std::min(keep.size(), (t + 1) * chunk); ++k) {
            const auto& c = classes[keep[k]];
            out[k] = {c, shape(c.rep)};
        }
    });
    return out;
}

struct WeylSum {
    Complex value;
    std::uint64_t count = 0; // fields with F(|disc|/X) > 0
};

// Sum of F(|disc|/X) E(ir, tau_K) over the fields of one sign. `covered` is
// the largest |disc| the class list is known to be complete for.
inline WeylSum weyl_sum_empirical(const EisensteinSeries& E, const TestFunction& F, double X, int sign,
                                  const std::vector<ShapedClass>& fields, std::uint64_t covered,
                                  unsigned workers = 1)
{
    F.validate();
    if (!(X > 0))
        throw std::invalid_argument("X must be positive");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("sign must be +1 or -1");
    if (X * F.hi > static_cast<double>(covered))
        throw CacheError("class list covers |disc| <= " + std::to_string(covered) + ", need " +
                         std::to_string(X * F.hi));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& c = fields[i].cls;
        if ((c.disc > 0) != (sign > 0))
            continue;
        if (F(static_cast<double>(abs_disc(c)) / X) > 0.0)
            idx.push_back(i);
    }
    std::vector<Complex> terms(idx.size());
    const std::size_t chunk = 2048;
    parallel_tasks((idx.size() + chunk - 1) / chunk, workers, [&](std::size_t t) {
        for (std::size_t k = t * chunk; k < std::min(idx.size(), (t + 1) * chunk); ++k) {
            const auto& f = fields[idx[k]];
            terms[k] = F(static_cast<double>(abs_disc(f.cls)) / X) * E(f.shape.tau);
        }
    });
    return {pairwise_sum(terms), idx.size()};
}

struct MainTerm {
    Complex first;  // the X^{(11+z)/12} term
    Complex second; // the X^{(11-z)/12} term carrying xi(z)/xi(1+z)
    Complex total() const { return first + second; }
    double euler_tail = 0; // bound from truncating both Euler products, not added to the value
};

namespace detail {

inline std::pair<Complex, double> main_term_piece(Complex z, const TestFunction& F, double X, int sign,
                                                  std::uint32_t prime_bound)
{
    const Complex e = (11.0 + z) / 12.0;
    Complex v = mellin_F(F, e) * std::exp(e * std::log(X)) * zeta((1.0 - z) / 3.0) *
                std::exp((z - 1.0) / 6.0 * std::log(2.0)) * std::exp((1.0 + 2.0 * z) / 6.0 * std::log(kPi)) *
                std::cos(kPi * (1.0 - z) / 6.0) * gamma_fn((1.0 - z) / 3.0) * gamma_fn((4.0 - z) / 6.0) /
                gamma_fn((7.0 - z) / 6.0);
    if (sign > 0)
        v *= std::exp((z - 7.0) / 4.0 * std::log(3.0));
    else
        v /= 3.0;
    auto ep = euler_product_main_term(z, prime_bound);
    return {v * ep.value, std::abs(v) * ep.tail_bound};
}

} // namespace detail

// Both printed main terms at z = ir.
inline MainTerm weyl_main_term(double r, const TestFunction& F, double X, int sign, std::uint32_t prime_bound)
{
    if (r == 0.0)
        throw PoleError("spectral parameter r must be nonzero");
    if (prime_bound < 100)
        throw std::invalid_argument("prime_bound must be >= 100");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("sign must be +1 or -1");
    F.validate();
    const Complex z(0.0, r);
    auto [t1, e1] = detail::main_term_piece(z, F, X, sign, prime_bound);
    auto [t2, e2] = detail::main_term_piece(-z, F, X, sign, prime_bound);
    const Complex ratio = xi(z) / xi(1.0 + z);
    MainTerm m;
    m.first = t1;
    m.second = ratio * t2;
    m.euler_tail = e1 + std::abs(ratio) * e2;
    return m;
}

struct WeylRecord {
    double X = 0;
    std::uint64_t count = 0;
    Complex empirical;
    Complex main;
    double abs_dev = 0;
    double norm_dev = 0;       // abs_dev / X^{13/15}
    double reality_defect = 0; // |Im(xi(1+ir) S)| / |xi(1+ir) S|
};

struct WeylReport {
    double r = 0;
    int sign = 1;
    std::vector<WeylRecord> records;
    double slope = 0; // least-squares slope of log|S_emp| against log X
    double euler_tail = 0;
};

inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const std::size_t n = xs.size();
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

inline WeylReport compare_report(double r, const TestFunction& F, const std::vector<double>& X_grid, int sign,
                                 std::uint32_t prime_bound, const std::vector<ShapedClass>& fields,
                                 std::uint64_t covered, unsigned workers = 1)
{
    const Complex z(0.0, r);
    EisensteinSeries E(z, 1e-13);
    const Complex norm = xi(1.0 + z);
    WeylReport rep;
    rep.r = r;
    rep.sign = sign;
    std::vector<double> xs, ys;
    for (double X : X_grid) {
        auto s = weyl_sum_empirical(E, F, X, sign, fields, covered, workers);
        auto m = weyl_main_term(r, F, X, sign, prime_bound);
        WeylRecord w;
        w.X = X;
        w.count = s.count;
        w.empirical = s.value;
        w.main = m.total();
        w.abs_dev = std::abs(s.value - w.main);
        w.norm_dev = w.abs_dev / std::pow(X, 13.0 / 15.0);
        Complex n = norm * s.value;
        w.reality_defect = std::abs(n) > 0 ? std::abs(n.imag()) / std::abs(n) : 0.0;
        rep.euler_tail = std::max(rep.euler_tail, m.euler_tail);
        rep.records.push_back(w);
        if (std::abs(s.value) > 0) {
            xs.push_back(X);
            ys.push_back(std::abs(s.value));
        }
    }
    rep.slope = loglog_slope(xs, ys);
    return rep;
}

} // namespace cubicshape

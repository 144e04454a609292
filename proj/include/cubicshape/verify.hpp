#pragma once

// Named invariant suites behind `cubicshape verify`. Each check compares a
// computed value against an independent reference.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cubicforms.hpp"
#include "dft.hpp"
#include "eisenstein.hpp"
#include "enumerate.hpp"
#include "identities.hpp"
#include "shapes.hpp"
#include "specialfun.hpp"

namespace cubicshape {

struct CheckRow {
    std::string check;
    std::string point;
    double value = 0;
    double reference = 0;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckRow> rows;

    bool passed() const
    {
        for (const auto& r : rows)
            if (!r.pass)
                return false;
        return !rows.empty();
    }

    std::size_t failures() const
    {
        std::size_t n = 0;
        for (const auto& r : rows)
            n += !r.pass;
        return n;
    }

    void add(std::string check, std::string point, double value, double reference, double tol)
    {
        double res = std::fabs(value - reference);
        rows.push_back({std::move(check), std::move(point), value, reference, res, tol, res <= tol});
    }

    void add_complex(std::string check, std::string point, Complex value, Complex reference, double tol)
    {
        double res = std::abs(value - reference);
        rows.push_back({std::move(check), std::move(point), std::abs(value), std::abs(reference), res, tol, res <= tol});
    }
};

inline std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_suite_csv(std::ostream& os, const SuiteResult& s)
{
    os << "suite,check,point,value,reference,residual,tolerance,pass\n";
    for (const auto& r : s.rows)
        os << s.suite << ',' << r.check << ",\"" << r.point << "\"," << fmt_double(r.value) << ','
           << fmt_double(r.reference) << ',' << fmt_double(r.residual) << ',' << fmt_double(r.tolerance) << ','
           << (r.pass ? 1 : 0) << '\n';
}

namespace detail {

inline std::string pt(std::initializer_list<std::int64_t> v)
{
    std::string s;
    for (auto x : v) {
        if (!s.empty())
            s += ' ';
        s += std::to_string(x);
    }
    return s;
}

} // namespace detail

// Mod p^2 transform of the non-maximal set against its closed form at
// (0,0,0,m) and (0,0,3m,n).
inline SuiteResult verify_dft(const std::vector<std::uint64_t>& primes = {2, 3, 5})
{
    SuiteResult s{"dft", {}};
    for (std::uint64_t p : primes) {
        const auto m2 = static_cast<std::int64_t>(p * p);
        for (std::int64_t m = 0; m < m2; ++m) {
            BinaryCubicForm xi{0, 0, 0, m};
            s.add_complex("N_p(0,0,0,m)", "p=" + std::to_string(p) + " m=" + std::to_string(m), dft_Np(p, xi),
                          closed_form_Np(p, xi), 1e-9);
        }
        for (std::int64_t m = 0; m < m2; ++m)
            for (std::int64_t n = 0; n < m2; ++n) {
                BinaryCubicForm xi{0, 0, 3 * m, n};
                s.add_complex("N_p(0,0,3m,n)", "p=" + std::to_string(p) + " m=" + std::to_string(m) +
                                                   " n=" + std::to_string(n),
                              dft_Np(p, xi), closed_form_Np(p, xi), 1e-9);
            }
    }
    return s;
}

// Reducible-set transforms (M1, M2 for odd p, M2' for p = 2) over a full
// period, and the singular-point tables.
inline SuiteResult verify_reducible_dft()
{
    SuiteResult s{"reducible-dft", {}};
    struct Case {
        std::uint64_t p;
        ReducibleSet set;
    };
    for (Case c : {Case{2, ReducibleSet::M1}, Case{3, ReducibleSet::M1}, Case{5, ReducibleSet::M1},
                   Case{2, ReducibleSet::M2Prime}, Case{3, ReducibleSet::M2}, Case{5, ReducibleSet::M2}}) {
        const auto m = static_cast<std::int64_t>(c.p * c.p);
        for (std::int64_t a = 0; a < m; ++a)
            for (std::int64_t h = 0; h < m; ++h)
                for (std::int64_t e = 0; e < m; ++e) {
                    Residue3 xi{a, 2 * h, e};
                    s.add(std::string("closed_") + to_string(c.set),
                          "p=" + std::to_string(c.p) + " xi=" + detail::pt({a, 2 * h, e}),
                          dft_reducible_closed(c.p, c.set, xi), dft_reducible(c.p, c.set, xi).real(), 1e-9);
                }
    }
    for (std::uint64_t p : {2, 3, 5}) {
        const auto P = static_cast<std::int64_t>(p);
        for (std::int64_t l : {std::int64_t{1}, std::int64_t{3}, P, 2 * P, 3 * P, P * P, 3 * P * P, 4 * P * P})
            for (std::int64_t b = 0; b <= 2 * P + 1; ++b)
                for (std::int64_t d = 0; d <= 2 * P + 1; ++d) {
                    if (gcd128(b, d) != 1)
                        continue;
                    auto point = SingularPoint::line(l, b, d);
                    s.add("singular_line", "p=" + std::to_string(p) + " l=" + std::to_string(l) +
                                               " b=" + std::to_string(b) + " d=" + std::to_string(d),
                          dft_Nr_singular(p, point), dft_Nr(p, point.frequency()).real(), 1e-9);
                }
        for (std::int64_t m = 0; m < P * P; ++m)
            for (std::int64_t n = 0; n < P * P; ++n) {
                auto point = SingularPoint::parabolic(m, n);
                s.add("singular_parabolic",
                      "p=" + std::to_string(p) + " m=" + std::to_string(m) + " n=" + std::to_string(n),
                      dft_Nr_singular(p, point), dft_Nr(p, point.frequency()).real(), 1e-9);
            }
    }
    return s;
}

// A(p^e, n^2) closed forms against counting, p in {2,3,5,7}, alpha <= 3,
// every valuation j <= alpha + 1. The 2-adic formula is stated for alpha >= 2.
inline SuiteResult verify_sqrt_count()
{
    SuiteResult s{"sqrt-count", {}};
    for (std::uint64_t p : {2, 3, 5, 7})
        for (int alpha = (p == 2 ? 2 : 1); alpha <= 3; ++alpha)
            for (int parity : {0, 1})
                for (int j = 0; j <= alpha + 1; ++j)
                    for (std::int64_t unit : {1, 3, 5, 7, 11}) {
                        if (unit % static_cast<std::int64_t>(p) == 0)
                            continue;
                        std::int64_t n = unit;
                        for (int i = 0; i < j; ++i)
                            n *= static_cast<std::int64_t>(p);
                        const int e = 2 * alpha + parity;
                        std::uint64_t mod = 1;
                        for (int i = 0; i < e; ++i)
                            mod *= p;
                        s.add("A(p^e,n^2)",
                              "p=" + std::to_string(p) + " e=" + std::to_string(e) + " n=" + std::to_string(n),
                              double(count_sqrt_closed_form(p, e, n)), double(count_sqrt_direct(mod, n * n)), 0.0);
                    }
    return s;
}

// K-Bessel values against closed forms, the three-term recurrence and symmetries.
inline SuiteResult verify_bessel()
{
    SuiteResult s{"bessel", {}};
    for (double x : {0.1, 1.0, 5.0, 20.0, 60.0}) {
        const double half = std::sqrt(kPi / (2 * x)) * std::exp(-x);
        s.add("K_1/2 closed form", "x=" + fmt_double(x), bessel_k(0.5, x).real(), half, 1e-13 * half);
        const double three = half * (1 + 1 / x);
        s.add("K_3/2 closed form", "x=" + fmt_double(x), bessel_k(1.5, x).real(), three, 1e-13 * three);
    }
    for (Complex nu : {Complex(0.3, 0), Complex(1, 0.5), Complex(0, 0.5), Complex(0, 2), Complex(2.5, 1)})
        for (double x : {0.5, 2.0, 7.0, 25.0}) {
            Complex lhs = bessel_k(nu + 1.0, x) - bessel_k(nu - 1.0, x);
            Complex rhs = 2.0 * nu / x * bessel_k(nu, x);
            double scale = std::abs(bessel_k(nu + 1.0, x)) + std::abs(bessel_k(nu - 1.0, x));
            s.add_complex("recurrence", "nu=" + format_complex(nu) + " x=" + fmt_double(x), lhs, rhs, 1e-12 * scale);
            Complex k = bessel_k(nu, x);
            s.add_complex("K_-nu = K_nu", "nu=" + format_complex(nu) + " x=" + fmt_double(x), bessel_k(-nu, x), k,
                          1e-13 * std::abs(k) + 1e-300);
            s.add_complex("conj symmetry", "nu=" + format_complex(nu) + " x=" + fmt_double(x),
                          bessel_k(std::conj(nu), x), std::conj(k), 1e-13 * std::abs(k) + 1e-300);
        }
    for (double r : {0.5, 1.0, 4.0}) {
        EisensteinSeries series(Complex(0, r));
        detail::ScaledBesselTable table(Complex(0, r / 2), EisensteinSeries::kTableLo, EisensteinSeries::kTableHi);
        for (double x = 5.3; x < 150; x *= 1.37) {
            Complex direct = bessel_k_scaled(Complex(0, r / 2), x);
            s.add_complex("tabulated e^x K", "nu=" + fmt_double(r / 2) + "i x=" + fmt_double(x), table.scaled(x), direct,
                          1e-13 * std::abs(direct));
        }
    }
    return s;
}

// E(z, tau) as a lattice sum: Epstein zeta by theta splitting. Independent of
// the Fourier development; used only as a cross-check.
inline Complex eisenstein_lattice_sum(Complex z, Complex tau, int N = 10)
{
    const Complex s = (1.0 + z) / 2.0;
    const double x = tau.real(), y = tau.imag();
    // int_1^inf e^{-X t} t^{a-1} dt
    auto tail = [](Complex a, double X) {
        auto f = [&](double v) { return std::exp(-X * v) * std::exp((a - 1.0) * std::log1p(v)); };
        return std::exp(-X) * integrate_doubling(f, 0.0, 45.0 / X, 1e-14, 0.0, 4, 1 << 12, gauss32());
    };
    Complex tot = 0;
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0)
                continue;
            double Q = ((m + n * x) * (m + n * x) + (n * y) * (n * y)) / y;
            double Qd = (double(m) * m * (x * x + y * y) - 2.0 * m * n * x + double(n) * n) / y;
            tot += tail(s, kPi * Q) + tail(1.0 - s, kPi * Qd);
        }
    tot += 1.0 / (s - 1.0) - 1.0 / s;
    Complex Z = tot * std::exp(s * std::log(kPi)) / gamma_fn(s);
    return Z / (2.0 * zeta(2.0 * s));
}

// sum over coprime (c, d) up to sign of (Im tau / |c tau + d|^2)^{(1+z)/2}
inline double eisenstein_coprime_sum(double z, Complex tau, int N)
{
    const long double s = (1.0L + z) / 2.0L;
    const long double x = tau.real(), y = tau.imag();
    long double acc = 0;
    for (int c = 0; c <= N; ++c)
        for (int d = -N; d <= N; ++d) {
            if ((c == 0 && d <= 0) || std::gcd(c, d < 0 ? -d : d) != 1)
                continue;
            long double q = (c * x + d) * (c * x + d) + (c * y) * (c * y);
            acc += std::pow(y / q, s);
        }
    return double(acc);
}

inline SuiteResult verify_eisenstein()
{
    SuiteResult s{"eisenstein", {}};
    const Complex grid[] = {{0, 1}, kHexagonalPoint, {0.3, 1.7}};
    for (Complex z : {Complex(0.3, 0), Complex(0.7, 0), Complex(1.5, 0), Complex(0.5, 2)})
        for (Complex t : grid) {
            Complex lhs = xi(z + 1.0) * eisenstein(z, t, 1e-13).value;
            Complex rhs = xi(1.0 - z) * eisenstein(-z, t, 1e-13).value;
            s.add_complex("functional equation", "z=" + format_complex(z) + " tau=" + format_complex(t), lhs, rhs, 1e-8);
        }
    for (double re : {1.5, 2.0, 3.0})
        for (Complex t : grid) {
            Complex ref = eisenstein_lattice_sum(re, t);
            s.add_complex("lattice sum", "z=" + fmt_double(re) + " tau=" + format_complex(t),
                          eisenstein(re, t, 1e-13).value, ref, 1e-6 * std::max(1.0, std::abs(ref)));
        }
    s.add("coprime sum", "z=3 tau=i N=2000", eisenstein(3.0, Complex(0, 1), 1e-13).value.real(),
          eisenstein_coprime_sum(3.0, Complex(0, 1), 2000), 1e-6);
    std::mt19937_64 rng(20240101);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.87, 4.0);
    for (int k = 0; k < 20; ++k) {
        Complex t(re(rng), im(rng));
        if (std::abs(t) < 1)
            t = -1.0 / t;
        for (double r : {0.5, 1.0, 2.0}) {
            auto v = eisenstein_spectral(r, shape_from_tau(t), 1e-13);
            s.add("reality of xi(1+ir)E(ir)", "r=" + fmt_double(r) + " tau=" + format_complex(t), v.normalized.imag(),
                  0.0, 1e-8 * std::max(1.0, std::abs(v.normalized)));
        }
        Complex moved = (2.0 * t + 1.0) / (5.0 * t + 3.0);
        s.add_complex("modular invariance", "tau=" + format_complex(t), eisenstein(Complex(0, 1), moved, 1e-13).value,
                      eisenstein(Complex(0, 1), t, 1e-13).value, 1e-8);
        s.add_complex("periodicity", "tau=" + format_complex(t), eisenstein(Complex(0, 1), t + 3.0, 1e-13).value,
                      eisenstein(Complex(0, 1), t, 1e-13).value, 1e-12);
    }
    return s;
}

// Exact covariant identities and reduction invariants on seeded random forms.
inline SuiteResult verify_reduction()
{
    SuiteResult s{"reduction", {}};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> U(-1000, 1000);
    std::size_t bad = 0, total = 0;
    for (int k = 0; k < 10000; ++k) {
        BinaryCubicForm f{U(rng), U(rng), U(rng), U(rng)};
        auto H = hessian(f);
        Int128 lhs = Int128(H.Q) * H.Q - 4 * Int128(H.P) * H.R;
        Int128 rhs = -3 * discriminant(f);
        ++total;
        bad += lhs != rhs;
    }
    s.add("hessian Q^2-4PR = -3 disc", "10000 forms, |coeff| <= 1000", double(bad), 0.0, 0.0);

    std::uniform_int_distribution<std::int64_t> V(-30, 30);
    std::size_t witness_bad = 0, idem_bad = 0, shape_bad = 0;
    double worst_shape = 0;
    for (int k = 0; k < 2000; ++k) {
        BinaryCubicForm f{V(rng), V(rng), V(rng), V(rng)};
        if (discriminant(f) == 0)
            continue;
        auto c = canonicalize(f);
        witness_bad += act(c.witness, f) != c.rep || std::abs(c.witness.det()) != 1;
        idem_bad += canonicalize(c.rep).rep != c.rep;
        if (!is_reducible(f)) {
            double d = std::abs(shape(f).tau - shape(c.rep).tau);
            worst_shape = std::max(worst_shape, d);
            shape_bad += d > 1e-9;
        }
    }
    s.add("canonical witness", "2000 forms, |coeff| <= 30", double(witness_bad), 0.0, 0.0);
    s.add("canonical idempotent", "2000 forms, |coeff| <= 30", double(idem_bad), 0.0, 0.0);
    s.add("shape class invariance", "2000 forms, |coeff| <= 30", worst_shape, 0.0, 1e-9);

    std::uniform_real_distribution<double> re(-40, 40), im(0.001, 3);
    double worst = 0;
    for (int k = 0; k < 2000; ++k) {
        Complex z(re(rng), im(rng));
        auto [t, g] = reduce_to_fundamental(z);
        Complex back = (double(g.m11) * z + double(g.m12)) / (double(g.m21) * z + double(g.m22));
        bool inside = std::abs(t.real()) <= 0.5 + 1e-12 && std::abs(t) >= 1 - 1e-12 && g.det() == 1;
        worst = std::max(worst, inside ? std::abs(back - t) / std::abs(t) : 1.0);
    }
    s.add("tau reduction witness", "2000 points", worst, 0.0, 1e-9);

    auto classes = enumerate_classes(100000, +1);
    double worst_hex = 0;
    for (const auto& c : classes)
        if (c.maximal && is_square(c.disc))
            worst_hex = std::max(worst_hex, std::abs(shape(c.rep).tau - kHexagonalPoint));
    s.add("cyclic classes hexagonal", "disc <= 1e5", worst_hex, 0.0, 1e-6);
    return s;
}

inline SuiteResult verify_identities()
{
    SuiteResult s{"identities", {}};
    for (const auto& c : identity_suite())
        s.rows.push_back({c.name, c.point, std::abs(c.lhs), std::abs(c.rhs), c.residual, c.tol, c.pass});
    return s;
}

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"dft",     "reducible-dft", "sqrt-count", "bessel",
                                                "eisenstein", "reduction",  "identities"};
    return names;
}

inline SuiteResult run_suite(const std::string& name)
{
    if (name == "dft")
        return verify_dft();
    if (name == "reducible-dft")
        return verify_reducible_dft();
    if (name == "sqrt-count")
        return verify_sqrt_count();
    if (name == "bessel")
        return verify_bessel();
    if (name == "eisenstein")
        return verify_eisenstein();
    if (name == "reduction")
        return verify_reduction();
    if (name == "identities")
        return verify_identities();
    throw std::invalid_argument("unknown suite " + name);
}

} // namespace cubicshape

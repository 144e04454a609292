#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"
#include "roots.hpp"

namespace cubicshape {

// a v^3 + b v^2 w + c v w^2 + d w^3
struct BinaryCubicForm {
    std::int64_t a = 0, b = 0, c = 0, d = 0;

    auto operator<=>(const BinaryCubicForm&) const = default;

    // member of the dual lattice: middle coefficients divisible by 3
    bool dual_integral() const { return b % 3 == 0 && c % 3 == 0; }

    BinaryCubicForm operator-() const { return {-a, -b, -c, -d}; }
};

inline std::ostream& operator<<(std::ostream& os, const BinaryCubicForm& f)
{
    return os << '(' << f.a << ',' << f.b << ',' << f.c << ',' << f.d << ')';
}

// 2x2 integer matrix [[m11, m12], [m21, m22]]
struct IntMatrix2 {
    std::int64_t m11 = 1, m12 = 0, m21 = 0, m22 = 1;

    auto operator<=>(const IntMatrix2&) const = default;

    static IntMatrix2 identity() { return {}; }

    std::int64_t det() const { return checked::narrow(Int128(m11) * m22 - Int128(m12) * m21); }

    IntMatrix2 operator*(const IntMatrix2& o) const
    {
        auto dot = [](std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t w) {
            return checked::narrow(checked::add(Int128(x) * y, Int128(z) * w));
        };
        return {dot(m11, o.m11, m12, o.m21), dot(m11, o.m12, m12, o.m22), dot(m21, o.m11, m22, o.m21),
                dot(m21, o.m12, m22, o.m22)};
    }

    IntMatrix2 transpose() const { return {m11, m21, m12, m22}; }
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix2& g)
{
    return os << "[[" << g.m11 << ',' << g.m12 << "],[" << g.m21 << ',' << g.m22 << "]]";
}

// P v^2 + Q v w + R w^2
struct QuadraticCovariant {
    std::int64_t P = 0, Q = 0, R = 0;

    auto operator<=>(const QuadraticCovariant&) const = default;

    Int128 discriminant() const { return checked::sub(checked::mul(Q, Q), checked::mul(4 * Int128(P), R)); }
};

// exact rational num/den with den > 0 and gcd 1
struct Rational {
    Int128 num = 0, den = 1;

    static Rational make(Int128 n, Int128 d)
    {
        if (d == 0)
            throw std::domain_error("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        Int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        return {n, d};
    }

    bool operator==(const Rational&) const = default;

    Rational operator+(const Rational& o) const
    {
        return make(checked::add(checked::mul(num, o.den), checked::mul(o.num, den)), checked::mul(den, o.den));
    }

    Rational operator-() const { return {-num, den}; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool is_integer() const { return den == 1; }
};

inline Int128 discriminant(const BinaryCubicForm& f)
{
    using namespace checked;
    const Int128 a = f.a, b = f.b, c = f.c, d = f.d;
    Int128 t1 = mul(mul(b, b), mul(c, c));
    Int128 t2 = mul(mul(18, mul(a, b)), mul(c, d));
    Int128 t3 = mul(mul(4, a), mul(c, mul(c, c)));
    Int128 t4 = mul(mul(4, mul(b, mul(b, b))), d);
    Int128 t5 = mul(27, mul(mul(a, a), mul(d, d)));
    return sub(sub(sub(add(t1, t2), t3), t4), t5);
}

// f(p, q), exactly
inline Int128 evaluate(const BinaryCubicForm& f, Int128 p, Int128 q)
{
    using namespace checked;
    Int128 p2 = mul(p, p), q2 = mul(q, q);
    Int128 s = mul(f.a, mul(p2, p));
    s = add(s, mul(f.b, mul(p2, q)));
    s = add(s, mul(f.c, mul(p, q2)));
    s = add(s, mul(f.d, mul(q2, q)));
    return s;
}

namespace detail {

// binary form coefficients in descending powers of v
template <std::size_t N>
using Poly = std::array<Int128, N>;

template <std::size_t N, std::size_t M>
Poly<N + M - 1> polymul(const Poly<N>& x, const Poly<M>& y)
{
    Poly<N + M - 1> r{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < M; ++j)
            r[i + j] = checked::add(r[i + j], checked::mul(x[i], y[j]));
    return r;
}

} // namespace detail

// (g . f)(v, w) = f((v, w) g). This is a left action: act(g, act(h, f)) = act(g h, f).
inline BinaryCubicForm act(const IntMatrix2& g, const BinaryCubicForm& f)
{
    using detail::Poly;
    if (g.det() == 0)
        throw std::domain_error("act needs an invertible matrix");
    // (v, w) g = (m11 v + m21 w, m12 v + m22 w)
    Poly<2> X{g.m11, g.m21}, Y{g.m12, g.m22};
    auto X2 = detail::polymul(X, X), Y2 = detail::polymul(Y, Y);
    auto X3 = detail::polymul(X2, X), Y3 = detail::polymul(Y2, Y);
    auto X2Y = detail::polymul(X2, Y), XY2 = detail::polymul(X, Y2);
    Poly<4> r{};
    for (int i = 0; i < 4; ++i) {
        Int128 s = checked::mul(f.a, X3[i]);
        s = checked::add(s, checked::mul(f.b, X2Y[i]));
        s = checked::add(s, checked::mul(f.c, XY2[i]));
        s = checked::add(s, checked::mul(f.d, Y3[i]));
        r[i] = s;
    }
    return {checked::narrow(r[0]), checked::narrow(r[1]), checked::narrow(r[2]), checked::narrow(r[3])};
}

// (g . q)(v, w) = q((v, w) g)
inline QuadraticCovariant act(const IntMatrix2& g, const QuadraticCovariant& q)
{
    using detail::Poly;
    Poly<2> X{g.m11, g.m21}, Y{g.m12, g.m22};
    auto X2 = detail::polymul(X, X), Y2 = detail::polymul(Y, Y), XY = detail::polymul(X, Y);
    std::array<Int128, 3> r{};
    for (int i = 0; i < 3; ++i)
        r[i] = checked::add(checked::add(checked::mul(q.P, X2[i]), checked::mul(q.Q, XY[i])),
                            checked::mul(q.R, Y2[i]));
    return {checked::narrow(r[0]), checked::narrow(r[1]), checked::narrow(r[2])};
}

// <x, y> = x4 y1 - x3 y2 / 3 + x2 y3 / 3 - x1 y4
inline Rational pairing(const BinaryCubicForm& x, const BinaryCubicForm& y)
{
    using namespace checked;
    Int128 three_times = sub(add(sub(mul(3, mul(x.d, y.a)), mul(x.c, y.b)), mul(x.b, y.c)), mul(3, mul(x.a, y.d)));
    return Rational::make(three_times, 3);
}

// (b^2 - 3ac, bc - 9ad, c^2 - 3bd); Q^2 - 4PR = -3 disc
inline QuadraticCovariant hessian(const BinaryCubicForm& f)
{
    using namespace checked;
    return {narrow(sub(mul(f.b, f.b), mul(3, mul(f.a, f.c)))), narrow(sub(mul(f.b, f.c), mul(9, mul(f.a, f.d)))),
            narrow(sub(mul(f.c, f.c), mul(3, mul(f.b, f.d))))};
}

inline int sign_of(Int128 x) { return (x > 0) - (x < 0); }

// Complex roots of f(t, 1), for a != 0 and disc != 0.
inline std::array<LComplex, 3> roots(const BinaryCubicForm& f)
{
    Int128 D = discriminant(f);
    return cubic_roots(f.a, f.b, f.c, f.d, sign_of(D));
}

// A coprime (p, q), q >= 0, with f(p, q) = 0, if there is one.
inline std::optional<std::pair<std::int64_t, std::int64_t>> rational_root(const BinaryCubicForm& f)
{
    if (f.a == 0)
        return std::pair<std::int64_t, std::int64_t>{1, 0};
    if (f.d == 0)
        return std::pair<std::int64_t, std::int64_t>{0, 1};
    Int128 D = discriminant(f);
    if (D == 0)
        throw DegenerateForm("rational_root needs a nonzero discriminant");
    auto rs = cubic_roots(f.a, f.b, f.c, f.d, sign_of(D));
    const std::uint64_t A = static_cast<std::uint64_t>(f.a < 0 ? -f.a : f.a);
    for (std::uint64_t q = 1; q * q <= A; ++q) {
        if (A % q)
            continue;
        for (std::uint64_t qq : {q, A / q}) {
            for (const auto& r : rs) {
                if (std::fabs(r.imag()) > 1e-6L * std::max(1.0L, std::abs(r)))
                    continue;
                long double target = r.real() * static_cast<long double>(qq);
                if (std::fabs(target) > 9e18L)
                    continue;
                auto p0 = static_cast<std::int64_t>(std::llround(target));
                for (std::int64_t p = p0 - 1; p <= p0 + 1; ++p) {
                    if (gcd128(p, qq) != 1)
                        continue;
                    if (evaluate(f, p, static_cast<Int128>(qq)) == 0)
                        return std::pair<std::int64_t, std::int64_t>{p, static_cast<std::int64_t>(qq)};
                }
            }
        }
    }
    return std::nullopt;
}

// Reducible over Z: has a linear factor with integer coefficients.
inline bool is_reducible(const BinaryCubicForm& f)
{
    if (discriminant(f) == 0)
        throw DegenerateForm("is_reducible needs a nonzero discriminant");
    return rational_root(f).has_value();
}

struct Canonical {
    BinaryCubicForm rep;
    IntMatrix2 witness; // act(witness, input) == rep
};

namespace detail {

// unimodular matrices with entries in {-1, 0, 1}
inline const std::vector<IntMatrix2>& small_unimodular()
{
    static const std::vector<IntMatrix2> mats = [] {
        std::vector<IntMatrix2> out;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int c = -1; c <= 1; ++c)
                    for (int d = -1; d <= 1; ++d) {
                        IntMatrix2 g{a, b, c, d};
                        auto det = g.det();
                        if (det == 1 || det == -1)
                            out.push_back(g);
                    }
        return out;
    }();
    return mats;
}

inline bool sign_normalized(const BinaryCubicForm& f)
{
    if (f.a != 0)
        return f.a > 0;
    if (f.b != 0)
        return f.b > 0;
    if (f.c != 0)
        return f.c > 0;
    return f.d > 0;
}

// Gauss reduction of a positive definite form to 0 <= Q <= P <= R.
// Returns (reduced, g) with act(g, q) == reduced.
inline std::pair<QuadraticCovariant, IntMatrix2> reduce_definite(QuadraticCovariant q)
{
    if (q.P <= 0 || q.discriminant() >= 0)
        throw std::domain_error("reduce_definite needs a positive definite form");
    IntMatrix2 g = IntMatrix2::identity();
    for (int guard = 0; guard < 10000; ++guard) {
        // translate: Q -> Q + 2 n P into (-P, P]
        Int128 n = floor_div(Int128(q.P) - q.Q, 2 * Int128(q.P));
        if (n != 0) {
            IntMatrix2 t{1, 0, checked::narrow(n), 1};
            q = act(t, q);
            g = t * g;
        }
        if (q.P > q.R) {
            IntMatrix2 s{0, 1, 1, 0};
            q = act(s, q);
            g = s * g;
            continue;
        }
        break;
    }
    if (q.Q < 0) {
        IntMatrix2 r{1, 0, 0, -1};
        q = act(r, q);
        g = r * g;
    }
    return {q, g};
}

// Pick the lex-smallest sign-normalized form in Aut(cov) . f0.
inline Canonical fiber_minimum(const BinaryCubicForm& f0, const QuadraticCovariant& cov, const IntMatrix2& g0,
                               bool cov_up_to_sign)
{
    std::optional<Canonical> best;
    for (const auto& g : small_unimodular()) {
        QuadraticCovariant image = act(g, cov);
        bool fixes = image == cov;
        if (!fixes && cov_up_to_sign)
            fixes = image.P == -cov.P && image.Q == -cov.Q && image.R == -cov.R;
        if (!fixes)
            continue;
        BinaryCubicForm h = act(g, f0);
        if (!sign_normalized(h))
            continue;
        if (!best || h < best->rep)
            best = Canonical{h, g * g0};
    }
    if (!best)
        throw std::logic_error("empty reduced fiber");
    return *best;
}

// Reduction test for irreducible forms with negative discriminant and a > 0:
// the non-real root lies in {-1/2 < Re z < 0, |z| > 1}. Each boundary would
// make (-b:a), (a-b:a) or (-d:a) a rational root, so the inequalities are
// strict and the reduced form is unique.
inline bool negative_root_reduced(const BinaryCubicForm& f)
{
    if (f.a <= 0)
        return false;
    // Re z < 0  <=>  f(-b, a) < 0
    if (evaluate(f, -Int128(f.b), f.a) >= 0)
        return false;
    // Re z > -1/2  <=>  f(a - b, a) > 0
    if (evaluate(f, Int128(f.a) - f.b, f.a) <= 0)
        return false;
    // |z| > 1  <=>  d f(-d, a) < 0
    Int128 v = evaluate(f, -Int128(f.d), f.a);
    return sign_of(v) * sign_of(f.d) < 0;
}

inline Canonical canonical_negative_irreducible(const BinaryCubicForm& f)
{
    BinaryCubicForm h = f;
    IntMatrix2 g = IntMatrix2::identity();
    auto apply = [&](const IntMatrix2& m) {
        h = act(m, h);
        g = m * g;
    };
    for (int guard = 0; guard < 1000; ++guard) {
        auto rs = cubic_roots(h.a, h.b, h.c, h.d, -1);
        const LComplex z = rs[1];
        if (std::fabs(z.real()) > 0.5L + 1e-12L) {
            apply({1, 0, static_cast<std::int64_t>(std::llround(z.real())), 1}); // z -> z - n
            continue;
        }
        if (std::norm(z) < 1 - 1e-12L) {
            apply({0, -1, 1, 0}); // z -> -1/z
            continue;
        }
        if (z.real() > 0)
            apply({-1, 0, 0, 1}); // z -> -conj(z)
        break;
    }
    if (h.a < 0)
        apply({-1, 0, 0, -1});
    if (!negative_root_reduced(h)) {
        // floating roundoff near the boundary
        bool moved = false;
        for (const auto& m : small_unimodular()) {
            if (negative_root_reduced(act(m, h))) {
                apply(m);
                moved = true;
                break;
            }
        }
        if (!moved)
            throw std::logic_error("negative-discriminant reduction failed");
    }
    return {h, g};
}

// Quadratic factor of a reducible form with negative discriminant, scaled to be positive definite.
inline QuadraticCovariant definite_quadratic_factor(const BinaryCubicForm& f)
{
    auto root = rational_root(f);
    if (!root)
        throw std::logic_error("expected a rational root");
    auto [p, q] = *root;
    // f = (q v - p w)(alpha v^2 + beta v w + gamma w^2)
    Int128 alpha, beta, gamma;
    if (q == 0) {
        // p = 1, factor -w
        alpha = -Int128(f.b);
        beta = -Int128(f.c);
        gamma = -Int128(f.d);
    } else {
        alpha = Int128(f.a) / q;
        beta = (Int128(f.b) + p * alpha) / q;
        gamma = (Int128(f.c) + p * beta) / q;
    }
    if (alpha < 0) {
        alpha = -alpha;
        beta = -beta;
        gamma = -gamma;
    }
    return {checked::narrow(alpha), checked::narrow(beta), checked::narrow(gamma)};
}

} // namespace detail

// Canonical GL2(Z)-class representative with witness.
inline Canonical canonicalize(const BinaryCubicForm& f)
{
    const Int128 D = discriminant(f);
    if (D == 0)
        throw DegenerateForm("canonicalize needs a nonzero discriminant");
    if (D > 0) {
        auto [H, g] = detail::reduce_definite(hessian(f));
        BinaryCubicForm f0 = act(g, f);
        return detail::fiber_minimum(f0, H, g, false);
    }
    if (f.a != 0 && !rational_root(f))
        return detail::canonical_negative_irreducible(f);
    auto [q, g] = detail::reduce_definite(detail::definite_quadratic_factor(f));
    BinaryCubicForm f0 = act(g, f);
    return detail::fiber_minimum(f0, q, g, true);
}

// Order of the GL2(Z) stabilizer of f (1 or 3 for irreducible forms).
inline int stabilizer_order(const BinaryCubicForm& f)
{
    if (discriminant(f) == 0)
        throw DegenerateForm("stabilizer_order needs a nonzero discriminant");
    BinaryCubicForm rep = canonicalize(f).rep;
    int n = 0;
    for (const auto& g : detail::small_unimodular())
        if (act(g, rep) == rep)
            ++n;
    return n;
}

struct FormClass {
    BinaryCubicForm rep;
    std::int64_t disc = 0;
    int stab_order = 1;
    bool reducible = false;
    bool maximal = false;

    bool operator==(const FormClass&) const = default;
};

inline std::uint64_t abs_disc(const FormClass& c) { return static_cast<std::uint64_t>(c.disc < 0 ? -c.disc : c.disc); }

// (|disc|, rep) ordering used for caches and reports
inline bool class_order(const FormClass& x, const FormClass& y)
{
    auto ax = abs_disc(x), ay = abs_disc(y);
    if (ax != ay)
        return ax < ay;
    if (x.disc != y.disc)
        return x.disc < y.disc;
    return x.rep < y.rep;
}

} // namespace cubicshape

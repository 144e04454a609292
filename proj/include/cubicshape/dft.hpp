#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "arith.hpp"
#include "cubicforms.hpp"
#include "errors.hpp"
#include "maximality.hpp"

namespace cubicshape {

using Complex = std::complex<double>;

namespace detail {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// sum_k hist[k] e(k / modulus)
inline Complex exponential_sum(const std::vector<std::int64_t>& hist)
{
    const std::size_t n = hist.size();
    Complex s = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (hist[k])
            s += static_cast<double>(hist[k]) * std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    return s;
}

inline void require_prime(std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("p must be prime");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Four-dimensional transform of the non-maximality indicator on V(Z/p^2).

using Residue4 = std::array<std::int32_t, 4>;

// Forms mod p^2 that are non-maximal at p. Cached per prime.
inline const std::vector<Residue4>& nonmaximal_residues(std::uint64_t p)
{
    static std::mutex mutex;
    static std::map<std::uint64_t, std::vector<Residue4>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(p);
    if (it != cache.end())
        return it->second;
    const auto m = static_cast<std::int32_t>(p * p);
    std::vector<Residue4> out;
    for (std::int32_t a = 0; a < m; ++a)
        for (std::int32_t b = 0; b < m; ++b)
            for (std::int32_t c = 0; c < m; ++c)
                for (std::int32_t d = 0; d < m; ++d)
                    if (is_nonmaximal_at({a, b, c, d}, p))
                        out.push_back({a, b, c, d});
    return cache.emplace(p, std::move(out)).first->second;
}

// Integer coordinates (xi1, xi2/3, xi3/3, xi4) of a dual form, so that
// <x, xi> = x4 k0 - x3 k1 + x2 k2 - x1 k3.
inline std::array<std::int64_t, 4> dual_coordinates(const BinaryCubicForm& xi)
{
    if (!xi.dual_integral())
        throw std::invalid_argument("frequency must have middle coefficients divisible by 3");
    return {xi.a, xi.b / 3, xi.c / 3, xi.d};
}

inline std::int64_t pairing_mod(const Residue4& x, const std::array<std::int64_t, 4>& k, std::int64_t m)
{
    Int128 s = Int128(x[3]) * k[0] - Int128(x[2]) * k[1] + Int128(x[1]) * k[2] - Int128(x[0]) * k[3];
    return static_cast<std::int64_t>(((s % m) + m) % m);
}

inline constexpr std::array<std::uint64_t, 4> kDftPrimes{2, 3, 5, 7};

// p^-8 sum_{x mod p^2} N_p(x) e(<x, xi> / p^2), by brute force.
inline Complex dft_Np(std::uint64_t p, const BinaryCubicForm& xi)
{
    if (p != 2 && p != 3 && p != 5 && p != 7)
        throw Unsupported("dft_Np supports p in {2, 3, 5, 7}");
    const auto k = dual_coordinates(xi);
    const auto m = static_cast<std::int64_t>(p * p);
    std::vector<std::int64_t> hist(m, 0);
    for (const auto& x : nonmaximal_residues(p))
        ++hist[pairing_mod(x, k, m)];
    return detail::exponential_sum(hist) / std::pow(static_cast<double>(p), 8);
}

// Support of N_q mod q^2 for squarefree q, glued from the prime supports by CRT. Cached.
inline const std::vector<Residue4>& nonmaximal_residues_composite(std::uint64_t q)
{
    static std::mutex mutex;
    static std::map<std::uint64_t, std::vector<Residue4>> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(q);
        if (it != cache.end())
            return it->second;
    }
    std::vector<Residue4> support{{0, 0, 0, 0}};
    std::int64_t modulus = 1;
    for (auto [p, e] : factor(q)) {
        const std::int64_t m = static_cast<std::int64_t>(p * p);
        std::int64_t u = 1; // modulus^{-1} mod m
        while ((modulus * u) % m != 1)
            ++u;
        const auto& local = nonmaximal_residues(p);
        if (support.size() * local.size() > 60000000ull)
            throw ResourceLimit("dft_Nq support too large");
        std::vector<Residue4> next;
        next.reserve(support.size() * local.size());
        for (const auto& s : support)
            for (const auto& l : local) {
                Residue4 r;
                for (int i = 0; i < 4; ++i) {
                    // r = s + modulus * ((l - s) u mod m)
                    std::int64_t t = ((l[i] - s[i]) % m + m) % m * u % m;
                    r[i] = static_cast<std::int32_t>(s[i] + modulus * t);
                }
                next.push_back(r);
            }
        support.swap(next);
        modulus *= m;
    }
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(q, std::move(support)).first->second;
}

// Same sum for squarefree q with all primes <= 7, over x mod q^2 (support built by CRT).
inline Complex dft_Nq(std::uint64_t q, const BinaryCubicForm& xi)
{
    if (q == 0 || !is_squarefree(q))
        throw std::invalid_argument("q must be squarefree");
    const auto k = dual_coordinates(xi);
    const auto fac = factor(q);
    for (auto [p, e] : fac)
        if (p > 7)
            throw Unsupported("dft_Nq supports primes up to 7");
    const std::int64_t Q = static_cast<std::int64_t>(q * q);
    const auto& support = nonmaximal_residues_composite(q);
    std::vector<std::int64_t> hist(Q, 0);
    for (const auto& x : support)
        ++hist[pairing_mod(x, k, Q)];
    return detail::exponential_sum(hist) / std::pow(static_cast<double>(q), 8);
}

// Closed-form values at (0,0,0,m) and (0,0,3m,n).
inline double closed_form_Np(std::uint64_t p, const BinaryCubicForm& xi)
{
    detail::require_prime(p);
    const double P = static_cast<double>(p);
    const double top = 1 / (P * P) + 1 / (P * P * P) - std::pow(P, -5);
    const double mid = 1 / (P * P * P) - std::pow(P, -5);
    const auto p2 = static_cast<std::int64_t>(p * p);
    if (xi.a != 0 || xi.b != 0)
        throw Unsupported("closed form known only at (0,0,0,m) and (0,0,3m,n)");
    if (xi.c == 0)
        return xi.d % p2 == 0 ? top : mid;
    if (xi.c % 3 != 0)
        throw std::invalid_argument("frequency must be dual-integral");
    const std::int64_t m = xi.c / 3, n = xi.d;
    if (m % p2 == 0 && n % p2 == 0)
        return top;
    if (m % static_cast<std::int64_t>(p) == 0)
        return mid;
    return 0.0;
}

// ---------------------------------------------------------------------------
// Reducible forms b v^2 w + c v w^2 + d w^3 mod p^2, and their three-dimensional transform.

using Residue3 = std::array<std::int64_t, 3>;

enum class ReducibleSet { M1, M2, M2Prime };

enum class NonmaxClass { M1, M2, None };

inline const char* to_string(ReducibleSet s)
{
    switch (s) {
    case ReducibleSet::M1:
        return "M1";
    case ReducibleSet::M2:
        return "M2";
    default:
        return "M2'";
    }
}

inline const char* to_string(NonmaxClass s)
{
    switch (s) {
    case NonmaxClass::M1:
        return "M1";
    case NonmaxClass::M2:
        return "M2";
    default:
        return "none";
    }
}

namespace detail {

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m)
{
    a = mod(a, m);
    for (std::int64_t x = 1; x < m; ++x)
        if ((a * x) % m == 1)
            return x;
    throw std::domain_error("not invertible");
}

inline std::vector<Residue3> m2_prime_residues()
{
    std::vector<Residue3> out;
    for (std::int64_t beta : {1, 3})
        for (std::int64_t delta : {0, 1})
            for (std::int64_t gamma : {0, 1})
                out.push_back({beta, mod(2 * beta * (delta + gamma), 4), mod(beta * delta * (delta + 2 * gamma), 4)});
    return out;
}

} // namespace detail

// Members of M1, M2 (odd or even p) or M2' (p = 2) as residues mod p^2.
inline std::vector<Residue3> reducible_set_residues(std::uint64_t p, ReducibleSet set)
{
    detail::require_prime(p);
    const auto m = static_cast<std::int64_t>(p * p);
    const auto P = static_cast<std::int64_t>(p);
    std::vector<Residue3> out;
    switch (set) {
    case ReducibleSet::M1:
        for (std::int64_t b = 0; b < m; b += P)
            for (std::int64_t c = 0; c < m; ++c)
                for (std::int64_t d = 0; d < m; ++d)
                    out.push_back({b, c, d});
        break;
    case ReducibleSet::M2: {
        std::vector<char> seen(m * m * m, 0);
        for (std::int64_t beta = 1; beta < m; ++beta) {
            if (beta % P == 0)
                continue;
            for (std::int64_t delta = 0; delta < m; ++delta) {
                Residue3 r{beta, mod(2 * beta * delta, m), mod(beta * delta % m * delta, m)};
                auto key = (r[0] * m + r[1]) * m + r[2];
                if (!seen[key]) {
                    seen[key] = 1;
                    out.push_back(r);
                }
            }
        }
        break;
    }
    case ReducibleSet::M2Prime:
        if (p != 2)
            throw Unsupported("M2' is defined only for p = 2");
        out = detail::m2_prime_residues();
        break;
    }
    return out;
}

// Which set of the non-maximal classification contains (b, c, d) mod p^2.
inline NonmaxClass classify_reducible_nonmax(const Residue3& x, std::uint64_t p)
{
    detail::require_prime(p);
    const auto m = static_cast<std::int64_t>(p * p);
    const auto P = static_cast<std::int64_t>(p);
    const std::int64_t b = mod(x[0], m), c = mod(x[1], m), d = mod(x[2], m);
    if (b % P == 0)
        return NonmaxClass::M1;
    if (p == 2) {
        for (const auto& r : detail::m2_prime_residues())
            if (r[0] == b && r[1] == c && r[2] == d)
                return NonmaxClass::M2;
        return NonmaxClass::None;
    }
    // c = 2 b delta, d = b delta^2
    const std::int64_t delta = c * detail::inverse_mod(2 * b, m) % m;
    return mod(b * delta % m * delta, m) == d ? NonmaxClass::M2 : NonmaxClass::None;
}

// p^-6 sum_{x in set} e((x1 xi3 - x2 h + x3 xi1) / p^2) with h = xi_mid / 2.
inline Complex dft_reducible(std::uint64_t p, ReducibleSet set, const Residue3& xi)
{
    if (p > 13)
        throw Unsupported("dft_reducible supports p <= 13");
    if (xi[1] % 2 != 0)
        throw std::invalid_argument("middle frequency must be even");
    const auto m = static_cast<std::int64_t>(p * p);
    const std::int64_t k1 = mod(xi[0], m), h = mod(xi[1] / 2, m), k3 = mod(xi[2], m);
    std::vector<std::int64_t> hist(m, 0);
    for (const auto& x : reducible_set_residues(p, set))
        ++hist[mod(x[0] * k3 - x[1] * h + x[2] * k1, m)];
    return detail::exponential_sum(hist) / std::pow(static_cast<double>(p), 6);
}

// Transform of N^r_p = 1_M1 + 1_M2 (M2' at p = 2), brute force.
inline Complex dft_Nr(std::uint64_t p, const Residue3& xi)
{
    return dft_reducible(p, ReducibleSet::M1, xi) +
           dft_reducible(p, p == 2 ? ReducibleSet::M2Prime : ReducibleSet::M2, xi);
}

// Closed forms of the transforms of 1_M1, 1_M2 (odd p) and 1_M2' (p = 2).
inline double dft_reducible_closed(std::uint64_t p, ReducibleSet set, const Residue3& xi)
{
    detail::require_prime(p);
    if (xi[1] % 2 != 0)
        throw std::invalid_argument("middle frequency must be even");
    const auto m = static_cast<std::int64_t>(p * p);
    const auto P = static_cast<std::int64_t>(p);
    const double Pd = static_cast<double>(p);
    const std::int64_t x1 = mod(xi[0], m), x2 = mod(xi[1] / 2, m), x3 = mod(xi[2], m);
    switch (set) {
    case ReducibleSet::M1:
        return (x1 == 0 && x2 == 0 && x3 % P == 0) ? 1 / Pd : 0.0;
    case ReducibleSet::M2Prime: {
        if (p != 2)
            throw Unsupported("M2' is defined only for p = 2");
        double s = 0;
        if (x2 % 2 == 0)
            s += (x3 % 4 == 0) - (x3 % 4 == 2);
        if ((x1 + x2) % 2 == 0) {
            std::int64_t t = mod(x3 - 2 * x2 + x1, 4);
            s += (t == 0) - (t == 2);
        }
        return s / 16;
    }
    case ReducibleSet::M2:
        break;
    }
    if (p == 2)
        throw Unsupported("closed form for M2 is stated for odd p");
    if (x1 % P == 0 && x2 % P == 0 && x3 % P == 0) {
        const std::int64_t y1 = x1 / P, y2 = x2 / P, y3 = x3 / P; // mod p
        const double P3 = Pd * Pd * Pd;
        if (y1 == 0 && y2 == 0)
            return y3 == 0 ? (Pd - 1) / P3 : -1 / P3;
        if (y1 != 0) {
            int roots = 0;
            for (std::int64_t delta = 0; delta < P; ++delta)
                roots += mod(y1 * delta * delta - 2 * y2 * delta + y3, P) == 0;
            return (roots - 1) / P3;
        }
        return 0.0;
    }
    if (x1 % P == 0)
        return 0.0;
    const double P4 = Pd * Pd * Pd * Pd;
    const std::int64_t disc = mod(x1 * x3 - x2 * x2, m);
    if (disc == 0)
        return (Pd - 1) / P4;
    if (disc % P == 0)
        return -1 / P4;
    return 0.0;
}

// Singular frequencies: l (b^2, 2bd, d^2) with gcd(b, d) = 1, or (0, 2m, n).
struct SingularPoint {
    enum Kind { Line, Parabolic } kind = Line;
    std::int64_t l = 0, b = 0, d = 0; // Line
    std::int64_t m = 0, n = 0;        // Parabolic

    static SingularPoint line(std::int64_t l, std::int64_t b, std::int64_t d) { return {Line, l, b, d, 0, 0}; }
    static SingularPoint parabolic(std::int64_t m, std::int64_t n) { return {Parabolic, 0, 0, 0, m, n}; }

    Residue3 frequency() const
    {
        if (kind == Line)
            return {l * b * b, 2 * l * b * d, l * d * d};
        return {0, 2 * m, n};
    }
};

namespace detail {

// exponent of p in n (n != 0); large for n = 0
inline int valuation(std::int64_t n, std::uint64_t p)
{
    if (n == 0)
        return 1 << 20;
    int v = 0;
    const auto P = static_cast<std::int64_t>(p);
    while (n % P == 0) {
        n /= P;
        ++v;
    }
    return v;
}

inline double singular_table_value(std::uint64_t p, const SingularPoint& pt)
{
    const double P = static_cast<double>(p);
    if (pt.kind == SingularPoint::Line) {
        if (gcd128(pt.b, pt.d) != 1)
            throw std::invalid_argument("line point needs gcd(b, d) = 1");
        const int vl = valuation(pt.l, p), vb = valuation(pt.b, p), vd = valuation(pt.d, p);
        if (p == 2) {
            if (vl >= 2)
                return 5.0 / 8;
            if (vl == 1 && vb >= 1)
                return 3.0 / 8;
            if (vl == 0 && vb == 0 && vd >= 1)
                return 1.0 / 16;
            // brute force gives +1/16 here; kept as tabulated so reducible-dft flags it
            if (vl == 0 && vb == 0 && vd == 0)
                return -1.0 / 16;
            return 0.0;
        }
        if (vl >= 2)
            return 1 / P + 1 / (P * P) - 1 / (P * P * P);
        if (vl == 1 && vb >= 1)
            return 1 / P - 1 / (P * P * P);
        if (vl == 0 && vb == 0)
            return 1 / (P * P * P) - 1 / (P * P * P * P);
        return 0.0;
    }
    const int vm = valuation(pt.m, p), vn = valuation(pt.n, p);
    if (p == 2) {
        if (vm >= 2 && vn >= 2)
            return 5.0 / 8;
        if (vm >= 2 && vn == 1)
            return 3.0 / 8;
        if (vm == 1 && vn >= 2)
            return 1.0 / 8;
        if (vm == 1 && vn == 1)
            return -1.0 / 8;
        return 0.0;
    }
    if (vm >= 2 && vn >= 2)
        return 1 / P + 1 / (P * P) - 1 / (P * P * P);
    if (vm >= 2 && vn == 1)
        return 1 / P - 1 / (P * P * P);
    return 0.0;
}

} // namespace detail

// Product over p | q of the tabulated values of the N^r_p transform at a singular point.
inline double dft_Nr_singular(std::uint64_t q, const SingularPoint& pt)
{
    if (q == 0 || !is_squarefree(q))
        throw std::invalid_argument("q must be squarefree");
    double v = 1;
    for (auto [p, e] : factor(q)) {
        if (p > 13)
            throw Unsupported("dft_Nr_singular supports primes up to 13");
        v *= detail::singular_table_value(p, pt);
    }
    return v;
}

// Full period of the N^r_p transform, indexed by (xi1, h, xi3) mod p^2 with xi_mid = 2h.
struct DftTable {
    std::uint64_t p = 0;
    int domain_dim = 3;
    std::map<std::array<std::int64_t, 4>, Complex> values;
};

inline DftTable dft_table_Nr(std::uint64_t p)
{
    DftTable t;
    t.p = p;
    t.domain_dim = 3;
    const auto m = static_cast<std::int64_t>(p * p);
    for (std::int64_t a = 0; a < m; ++a)
        for (std::int64_t h = 0; h < m; ++h)
            for (std::int64_t c = 0; c < m; ++c)
                t.values[{a, 2 * h, c, 0}] = dft_Nr(p, {a, 2 * h, c});
    return t;
}

// sum over a full period of |closed-form N^r_p transform|
inline double abs_sum_closed_Nr(std::uint64_t p)
{
    const auto m = static_cast<std::int64_t>(p * p);
    double s = 0;
    for (std::int64_t a = 0; a < m; ++a)
        for (std::int64_t h = 0; h < m; ++h)
            for (std::int64_t c = 0; c < m; ++c) {
                Residue3 xi{a, 2 * h, c};
                s += std::fabs(dft_reducible_closed(p, ReducibleSet::M1, xi) +
                               dft_reducible_closed(p, p == 2 ? ReducibleSet::M2Prime : ReducibleSet::M2, xi));
            }
    return s;
}

// ---------------------------------------------------------------------------
// A(m, n) = #{x mod m : x^2 = n mod m}

inline std::uint64_t count_sqrt_direct(std::uint64_t m, std::int64_t n)
{
    const auto target = static_cast<std::uint64_t>(mod(n, static_cast<std::int64_t>(m)));
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < m; ++x)
        if (static_cast<unsigned __int128>(x) * x % m == target)
            ++count;
    return count;
}

inline std::uint64_t count_sqrt(std::uint64_t m, std::int64_t n)
{
    if (m == 0)
        throw std::invalid_argument("modulus must be positive");
    if (m > 1000000000ull)
        throw ResourceLimit("count_sqrt supports m <= 1e9");
    if (m <= 1000000ull)
        return count_sqrt_direct(m, n);
    std::uint64_t total = 1;
    for (auto [p, e] : factor(m)) {
        std::uint64_t pe = 1;
        for (int i = 0; i < e; ++i)
            pe *= p;
        if (pe > 1000000000ull)
            throw ResourceLimit("prime power too large");
        total *= count_sqrt_direct(pe, n);
    }
    return total;
}

// Closed form of A(p^e, n^2) with e = 2 alpha or 2 alpha + 1 and p^j || n.
inline std::uint64_t count_sqrt_closed_form(std::uint64_t p, int e, std::int64_t n)
{
    detail::require_prime(p);
    const int alpha = e / 2;
    const int j = detail::valuation(n, p);
    auto pw = [&](int k) {
        std::uint64_t r = 1;
        for (int i = 0; i < k; ++i)
            r *= p;
        return r;
    };
    if (p == 2) {
        if (alpha < 2)
            throw Unsupported("the p = 2 formula needs alpha >= 2");
        if (e % 2 == 0)
            return j >= alpha - 2 ? pw(alpha) : pw(j + 2);
        return j >= alpha ? pw(alpha) : pw(j + 2);
    }
    if (alpha < 1)
        throw Unsupported("the formula needs alpha >= 1");
    if (e % 2 == 0)
        return j >= alpha ? pw(alpha) : 2 * pw(j);
    return j > alpha ? pw(alpha) : 2 * pw(j);
}

} // namespace cubicshape

#pragma once

#include <cstdint>
#include <vector>

#include "arith.hpp"
#include "cubicforms.hpp"
#include "errors.hpp"

namespace cubicshape {

// Non-maximal at p: p divides every coefficient, or some point of P^1(F_p),
// moved to (1:0), gives p^2 | a' and p | b'.
inline bool is_nonmaximal_at(const BinaryCubicForm& f, std::uint64_t p)
{
    const Int128 P = static_cast<Int128>(p), P2 = P * P;
    auto divides = [](Int128 m, Int128 x) { return x % m == 0; };
    if (divides(P, f.a) && divides(P, f.b) && divides(P, f.c) && divides(P, f.d))
        return true;
    // point (1:0)
    if (divides(P2, f.a) && divides(P, f.b))
        return true;
    // points (r:1): a' = f(r, 1), b' = -(3 a r^2 + 2 b r + c)
    const Int128 a = mod(f.a, p * p), b = mod(f.b, p * p), c = mod(f.c, p * p), d = mod(f.d, p * p);
    for (Int128 r = 0; r < P; ++r) {
        Int128 value = ((a * r + b) * r + c) * r + d;
        if (!divides(P2, value))
            continue;
        Int128 slope = (3 * a * r + 2 * b) * r + c;
        if (divides(P, slope))
            return true;
    }
    return false;
}

struct LocalMaximalityProfile {
    BinaryCubicForm form;
    std::vector<std::uint64_t> tested_primes;
    std::vector<std::uint64_t> nonmaximal_at;
};

inline LocalMaximalityProfile local_profile(const BinaryCubicForm& f, const std::vector<std::uint64_t>& primes)
{
    LocalMaximalityProfile out{f, primes, {}};
    for (auto p : primes)
        if (is_nonmaximal_at(f, p))
            out.nonmaximal_at.push_back(p);
    return out;
}

// 1 if f is non-maximal at every prime dividing q.
inline int sieve_weight_Nq(const BinaryCubicForm& f, std::uint64_t q)
{
    if (q == 0 || !is_squarefree(q))
        throw std::invalid_argument("sieve_weight_Nq needs a squarefree q >= 1");
    for (auto [p, e] : factor(q))
        if (!is_nonmaximal_at(f, p))
            return 0;
    return 1;
}

inline constexpr std::uint64_t kMaxFactorableDisc = 100000000000000ull; // 1e14

// Maximal iff maximal at every p with p^2 | disc.
inline bool is_maximal_factored(const BinaryCubicForm& f, const Factorization& disc_factors)
{
    for (auto [p, e] : disc_factors)
        if (e >= 2 && is_nonmaximal_at(f, p))
            return false;
    return true;
}

inline bool is_maximal(const BinaryCubicForm& f)
{
    Int128 D = discriminant(f);
    if (D == 0)
        throw DegenerateForm("is_maximal needs a nonzero discriminant");
    Int128 A = abs128(D);
    if (A > static_cast<Int128>(kMaxFactorableDisc))
        throw ResourceLimit("discriminant too large to factor");
    return is_maximal_factored(f, factor(static_cast<std::uint64_t>(A)));
}

inline bool is_maximal(const BinaryCubicForm& f, const SpfTable& spf)
{
    Int128 D = abs128(discriminant(f));
    if (D == 0)
        throw DegenerateForm("is_maximal needs a nonzero discriminant");
    if (D > spf.limit())
        return is_maximal(f);
    return is_maximal_factored(f, spf.factor(static_cast<std::uint64_t>(D)));
}

} // namespace cubicshape

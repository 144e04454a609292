#pragma once

#include <cstdint>
#include <string>
#include <algorithm>

#include "errors.hpp"

namespace cubicshape {

using Int128 = __int128;

namespace checked {

inline Int128 add(Int128 x, Int128 y)
{
    Int128 r;
    if (__builtin_add_overflow(x, y, &r))
        throw ArithmeticOverflow("128-bit addition overflow");
    return r;
}

inline Int128 sub(Int128 x, Int128 y)
{
    Int128 r;
    if (__builtin_sub_overflow(x, y, &r))
        throw ArithmeticOverflow("128-bit subtraction overflow");
    return r;
}

inline Int128 mul(Int128 x, Int128 y)
{
    Int128 r;
    if (__builtin_mul_overflow(x, y, &r))
        throw ArithmeticOverflow("128-bit multiplication overflow");
    return r;
}

inline std::int64_t narrow(Int128 x)
{
    if (x > INT64_MAX || x < INT64_MIN)
        throw ArithmeticOverflow("value does not fit in 64 bits");
    return static_cast<std::int64_t>(x);
}

} // namespace checked

inline Int128 abs128(Int128 x) { return x < 0 ? -x : x; }

inline std::string to_string(Int128 x)
{
    if (x == 0)
        return "0";
    bool neg = x < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(x) : static_cast<unsigned __int128>(x);
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg)
        s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

inline Int128 gcd128(Int128 a, Int128 b)
{
    a = abs128(a);
    b = abs128(b);
    while (b) {
        Int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// floor(sqrt(n)) for n >= 0
inline std::uint64_t isqrt(std::uint64_t n)
{
    if (n == 0)
        return 0;
    auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
    while (static_cast<unsigned __int128>(r) * r > n)
        --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

inline bool is_square(Int128 n)
{
    if (n < 0)
        return false;
    if (n > static_cast<Int128>(UINT64_MAX))
        throw ArithmeticOverflow("square test beyond 64 bits");
    auto u = static_cast<std::uint64_t>(n);
    auto r = isqrt(u);
    return static_cast<unsigned __int128>(r) * r == u;
}

inline Int128 floor_div(Int128 a, Int128 b)
{
    Int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline Int128 ceil_div(Int128 a, Int128 b) { return -floor_div(-a, b); }

inline std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace cubicshape

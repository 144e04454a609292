#pragma once

#include <cstdint>
#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace cubicshape {

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n)
{
    std::vector<std::uint32_t> out;
    if (n < 2)
        return out;
    std::vector<bool> comp(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (comp[i])
            continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i)
            comp[j] = true;
    }
    return out;
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0)
            return false;
    return true;
}

using Factorization = std::vector<std::pair<std::uint64_t, int>>;

// Trial division; fine for n up to ~1e14.
inline Factorization factor(std::uint64_t n)
{
    Factorization f;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

// Smallest-prime-factor table, for factoring many numbers below a bound.
class SpfTable {
  public:
    explicit SpfTable(std::uint32_t limit) : spf_(limit + 1, 0)
    {
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (spf_[i])
                continue;
            for (std::uint64_t j = i; j <= limit; j += i)
                if (!spf_[j])
                    spf_[j] = static_cast<std::uint32_t>(i);
        }
    }

    std::uint32_t limit() const { return static_cast<std::uint32_t>(spf_.size() - 1); }

    Factorization factor(std::uint64_t n) const
    {
        if (n >= spf_.size())
            return cubicshape::factor(n);
        Factorization f;
        while (n > 1) {
            std::uint32_t p = spf_[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.emplace_back(p, e);
        }
        return f;
    }

  private:
    std::vector<std::uint32_t> spf_;
};

inline bool is_squarefree(std::uint64_t n)
{
    for (auto [p, e] : factor(n))
        if (e > 1)
            return false;
    return true;
}

inline int mobius(std::uint64_t n)
{
    int mu = 1;
    for (auto [p, e] : factor(n)) {
        if (e > 1)
            return 0;
        mu = -mu;
    }
    return mu;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> d{1};
    for (auto [p, e] : factor(n)) {
        std::size_t k = d.size();
        std::uint64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < k; ++j)
                d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

} // namespace cubicshape

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "arith.hpp"
#include "cubicforms.hpp"
#include "errors.hpp"
#include "maximality.hpp"
#include "parallel.hpp"

namespace cubicshape {

inline constexpr std::uint64_t kMaxEnumerationDisc = 100000000ull; // 1e8

// Coefficient box used by the enumeration, recorded in cache headers.
struct SearchBox {
    int sign = 1;
    std::uint64_t X = 0;
    std::int64_t a_max = 0;
    double b_radius = 0; // b in [-b_radius, 1.5 a + b_radius] (positive) or scaled by a (negative)
    double slack = 1;
    std::size_t tasks = 0;
};

// One unit of work: all classes with given leading pair (a, b).
struct EnumerationTask {
    std::int64_t a = 0, b = 0;
};

struct EnumerateOptions {
    unsigned workers = 1;
    // multiplies the search radii; > 1 only for completeness checks
    double slack = 1.0;
    // 0 = no limit; exceeded -> ResourceLimit after completed tasks are reported
    std::uint64_t max_classes = 0;
    // called once per finished task, serialized
    std::function<void(std::size_t task, const std::vector<FormClass>&)> on_task;
    // tasks already finished in an earlier run
    std::map<std::size_t, std::vector<FormClass>> resume;
};

namespace detail {

inline std::int64_t positive_a_max(std::uint64_t X, double slack)
{
    return static_cast<std::int64_t>(std::floor(slack * std::pow(16.0 * X / 729.0, 0.25))) + 1;
}

inline double positive_b_radius(std::uint64_t X, double slack)
{
    return slack * 3.0 * std::pow(X / 108.0, 0.25) * std::pow(4.0 / 3.0, 0.25);
}

inline std::int64_t negative_a_max(std::uint64_t X, double slack)
{
    return static_cast<std::int64_t>(std::floor(slack * std::pow(16.0 * X / 27.0, 0.25))) + 1;
}

// (X / (3 a^4))^(1/4)
inline double negative_t(std::uint64_t X, std::int64_t a, double slack)
{
    return slack * std::pow(static_cast<double>(X) / (3.0 * std::pow(static_cast<double>(a), 4)), 0.25);
}

inline std::vector<EnumerationTask> enumeration_tasks(std::uint64_t X, int sign, double slack)
{
    std::vector<EnumerationTask> tasks;
    if (sign > 0) {
        const std::int64_t amax = positive_a_max(X, slack);
        const double B = positive_b_radius(X, slack);
        for (std::int64_t a = 1; a <= amax; ++a) {
            auto lo = static_cast<std::int64_t>(std::floor(-B)) - 1;
            auto hi = static_cast<std::int64_t>(std::ceil(1.5 * a + B)) + 1;
            for (std::int64_t b = lo; b <= hi; ++b)
                tasks.push_back({a, b});
        }
    } else {
        const std::int64_t amax = negative_a_max(X, slack);
        for (std::int64_t a = 1; a <= amax; ++a) {
            const double T = negative_t(X, a, slack);
            auto lo = static_cast<std::int64_t>(std::floor(-a * T)) - 1;
            auto hi = static_cast<std::int64_t>(std::ceil(a * (T + 1.5))) + 1;
            for (std::int64_t b = lo; b <= hi; ++b)
                tasks.push_back({a, b});
        }
    }
    return tasks;
}

inline int fiber_stabilizer(const BinaryCubicForm& f)
{
    int n = 0;
    for (const auto& g : small_unimodular())
        if (act(g, f) == f)
            ++n;
    return n;
}

class MaximalityOracle {
  public:
    explicit MaximalityOracle(std::uint64_t X)
    {
        if (X <= 50000000ull)
            spf_ = std::make_unique<SpfTable>(static_cast<std::uint32_t>(std::max<std::uint64_t>(X, 2)));
    }

    bool operator()(const BinaryCubicForm& f, std::uint64_t abs_disc) const
    {
        if (spf_ && abs_disc <= spf_->limit())
            return is_maximal_factored(f, spf_->factor(abs_disc));
        return is_maximal_factored(f, factor(abs_disc));
    }

  private:
    std::unique_ptr<SpfTable> spf_;
};

// Irreducible classes with 0 < disc <= X and leading pair (a, b): the forms
// with a > 0 and reduced Hessian 0 <= Q <= P <= R that are their own canonical rep.
inline void positive_task(std::int64_t a, std::int64_t b, std::uint64_t X, const MaximalityOracle& maximal,
                          std::vector<FormClass>& out)
{
    const Int128 sqrtX = isqrt(X);
    const Int128 b2 = Int128(b) * b;
    // 1 <= P = b^2 - 3ac <= sqrt(X)
    const Int128 c_lo = ceil_div(b2 - sqrtX, 3 * Int128(a));
    const Int128 c_hi = floor_div(b2 - 1, 3 * Int128(a));
    for (Int128 c = c_lo; c <= c_hi; ++c) {
        const Int128 P = b2 - 3 * a * c;
        // 0 <= Q = bc - 9ad <= P
        const Int128 bc = b * c;
        const Int128 d_lo = ceil_div(bc - P, 9 * Int128(a));
        const Int128 d_hi = floor_div(bc, 9 * Int128(a));
        for (Int128 d = d_lo; d <= d_hi; ++d) {
            const Int128 Q = bc - 9 * a * d;
            const Int128 R = c * c - 3 * b * d;
            if (R < P)
                continue;
            const Int128 D3 = 4 * P * R - Q * Q;
            if (D3 > 3 * Int128(X))
                continue;
            BinaryCubicForm f{a, b, checked::narrow(c), checked::narrow(d)};
            int stab = 1;
            if (Q == 0 || Q == P || P == R) {
                QuadraticCovariant H{checked::narrow(P), checked::narrow(Q), checked::narrow(R)};
                if (fiber_minimum(f, H, IntMatrix2::identity(), false).rep != f)
                    continue;
                stab = fiber_stabilizer(f);
            }
            if (rational_root(f))
                continue;
            const auto disc = static_cast<std::int64_t>(D3 / 3);
            out.push_back({f, disc, stab, false, maximal(f, static_cast<std::uint64_t>(disc))});
        }
    }
}

// Irreducible classes with -X <= disc < 0 and leading pair (a, b): the forms
// whose non-real root lies strictly inside the domain.
inline void negative_task(std::int64_t a, std::int64_t b, std::uint64_t X, double slack,
                          const MaximalityOracle& maximal, std::vector<FormClass>& out)
{
    const double A = static_cast<double>(a), Bd = static_cast<double>(b);
    const double ymax2 = slack * std::cbrt(static_cast<double>(X) / (4.0 * std::pow(A, 4)));
    // max over x in [-1/2, 0] of -2xb - 3ax^2
    double peak = std::max(0.0, Bd - 0.75 * A);
    const double xs = -Bd / (3 * A);
    if (xs > -0.5 && xs < 0)
        peak = std::max(peak, Bd * Bd / (3 * A));
    const auto c_lo = std::min(a, b);
    const auto c_hi = static_cast<std::int64_t>(std::floor(A * ymax2 + peak)) + 1;
    for (std::int64_t c = c_lo; c <= c_hi; ++c) {
        const double C = static_cast<double>(c);
        // a d(x) = bc + (2b^2 + 2ac) x + 8ab x^2 + 8a^2 x^3 for x = Re z in [-1/2, 0]
        auto ad = [&](double x) { return Bd * C + (2 * Bd * Bd + 2 * A * C) * x + 8 * A * Bd * x * x + 8 * A * A * x * x * x; };
        double lo = std::min(ad(-0.5), ad(0.0)), hi = std::max(ad(-0.5), ad(0.0));
        // critical points: 24 a^2 x^2 + 16 a b x + 2 b^2 + 2 a c = 0
        const double qa = 24 * A * A, qb = 16 * A * Bd, qc = 2 * Bd * Bd + 2 * A * C;
        const double disc = qb * qb - 4 * qa * qc;
        if (disc >= 0) {
            const double s = std::sqrt(disc);
            for (double x : {(-qb - s) / (2 * qa), (-qb + s) / (2 * qa)})
                if (x > -0.5 && x < 0) {
                    lo = std::min(lo, ad(x));
                    hi = std::max(hi, ad(x));
                }
        }
        const auto d_lo = static_cast<std::int64_t>(std::floor(lo / A)) - 1;
        const auto d_hi = static_cast<std::int64_t>(std::ceil(hi / A)) + 1;
        for (std::int64_t d = d_lo; d <= d_hi; ++d) {
            BinaryCubicForm f{a, b, c, d};
            const Int128 D = discriminant(f);
            if (D >= 0 || -D > static_cast<Int128>(X))
                continue;
            if (!negative_root_reduced(f))
                continue;
            if (rational_root(f))
                continue;
            const auto disc = static_cast<std::int64_t>(D);
            out.push_back({f, disc, 1, false, maximal(f, static_cast<std::uint64_t>(-disc))});
        }
    }
}

} // namespace detail

inline SearchBox search_box(std::uint64_t X, int sign, double slack = 1.0)
{
    SearchBox box;
    box.sign = sign;
    box.X = X;
    box.slack = slack;
    if (sign > 0) {
        box.a_max = detail::positive_a_max(X, slack);
        box.b_radius = detail::positive_b_radius(X, slack);
    } else {
        box.a_max = detail::negative_a_max(X, slack);
        box.b_radius = slack * std::pow(static_cast<double>(X) / 3.0, 0.25);
    }
    box.tasks = detail::enumeration_tasks(X, sign, slack).size();
    return box;
}

// Every GL2(Z)-class of irreducible integral binary cubic forms with
// 0 < sign * disc <= X, sorted by (|disc|, disc, rep).
inline std::vector<FormClass> enumerate_classes(std::uint64_t X, int sign, const EnumerateOptions& opt = {})
{
    if (X < 1)
        throw std::invalid_argument("X must be positive");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("sign must be +1 or -1");
    if (X > kMaxEnumerationDisc)
        throw ResourceLimit("enumeration is limited to |disc| <= 1e8");
    const auto tasks = detail::enumeration_tasks(X, sign, opt.slack);
    const detail::MaximalityOracle maximal(X);
    std::vector<std::vector<FormClass>> results(tasks.size());
    std::vector<char> done(tasks.size(), 0);
    std::uint64_t total = 0;
    for (const auto& [i, cls] : opt.resume) {
        if (i >= tasks.size())
            throw CacheError("checkpoint does not match the search box");
        results[i] = cls;
        done[i] = 1;
        total += cls.size();
    }
    std::atomic<std::uint64_t> count{total};
    std::mutex report_mutex;
    parallel_tasks(tasks.size(), opt.workers, [&](std::size_t i) {
        if (done[i])
            return;
        std::vector<FormClass> local;
        if (sign > 0)
            detail::positive_task(tasks[i].a, tasks[i].b, X, maximal, local);
        else
            detail::negative_task(tasks[i].a, tasks[i].b, X, opt.slack, maximal, local);
        std::uint64_t now = count.fetch_add(local.size()) + local.size();
        {
            std::lock_guard<std::mutex> lock(report_mutex);
            if (opt.on_task)
                opt.on_task(i, local);
        }
        results[i] = std::move(local);
        if (opt.max_classes && now > opt.max_classes)
            throw ResourceLimit("class limit exceeded during enumeration");
    });
    std::vector<FormClass> all;
    all.reserve(count.load());
    for (auto& r : results)
        all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end(), class_order);
    return all;
}

// A form w (b v^2 + c v w + d w^2) in the region 0 <= c < 2b, b >= 1.
struct ReducibleRep {
    BinaryCubicForm form;
    std::int64_t disc = 0;
    bool square_quadratic = false; // c^2 - 4bd is a square: three rational roots
    int multiplicity = 1;          // forms of the region in the same SL2(Z)-class
};

namespace detail {

// extended gcd: returns (x, y) with p x + q y = 1 for coprime p, q
inline std::pair<std::int64_t, std::int64_t> bezout(std::int64_t p, std::int64_t q)
{
    std::int64_t old_r = p, r = q, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t k = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - k * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - k * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - k * t);
    }
    if (old_r < 0) {
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_s, old_t};
}

// Move the root (p:q) of f to (1:0) with an SL2(Z) matrix and normalize into the region.
inline BinaryCubicForm region_form_for_root(const BinaryCubicForm& f, std::int64_t p, std::int64_t q)
{
    // g = [[p, q], [g21, g22]] with p g22 - q g21 = 1
    auto [x, y] = bezout(p, q); // p x + q y = 1
    IntMatrix2 g{p, q, -y, x};
    BinaryCubicForm h = act(g, f);
    if (h.a != 0)
        throw std::logic_error("root was not moved to infinity");
    if (h.b < 0)
        h = -h; // -I is in SL2
    if (h.b == 0)
        throw DegenerateForm("repeated root");
    // translate v -> v + n w: c -> c + 2 b n
    std::int64_t n = -static_cast<std::int64_t>(floor_div(h.c, 2 * Int128(h.b)));
    return act(IntMatrix2{1, 0, n, 1}, h);
}

} // namespace detail

// All forms of the region with 0 < |disc| <= X, sorted by (|disc|, disc, form).
inline std::vector<ReducibleRep> reducible_representatives(std::uint64_t X)
{
    if (X < 1)
        throw std::invalid_argument("X must be positive");
    if (X > kMaxEnumerationDisc)
        throw ResourceLimit("enumeration is limited to |disc| <= 1e8");
    std::vector<ReducibleRep> out;
    // disc = b^2 (c^2 - 4bd), so b^2 <= X
    const auto bmax = static_cast<std::int64_t>(isqrt(X));
    for (std::int64_t b = 1; b <= bmax; ++b) {
        const Int128 lim = static_cast<Int128>(X) / (Int128(b) * b); // |c^2 - 4bd| <= lim
        for (std::int64_t c = 0; c < 2 * b; ++c) {
            // -lim <= c^2 - 4bd <= lim, nonzero
            const Int128 c2 = Int128(c) * c;
            const Int128 d_lo = ceil_div(c2 - lim, 4 * Int128(b));
            const Int128 d_hi = floor_div(c2 + lim, 4 * Int128(b));
            for (Int128 d = d_lo; d <= d_hi; ++d) {
                const Int128 inner = c2 - 4 * b * d;
                if (inner == 0)
                    continue;
                BinaryCubicForm f{0, b, c, checked::narrow(d)};
                ReducibleRep rep{f, checked::narrow(Int128(b) * b * inner), false, 1};
                if (is_square(inner)) {
                    rep.square_quadratic = true;
                    const auto s = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(inner)));
                    // roots of b t^2 + c t + d: t = (-c +- s) / (2b)
                    std::set<BinaryCubicForm> images{f};
                    for (std::int64_t num : {-c + s, -c - s}) {
                        std::int64_t den = 2 * b;
                        auto g = static_cast<std::int64_t>(gcd128(num, den));
                        images.insert(detail::region_form_for_root(f, num / g, den / g));
                    }
                    rep.multiplicity = static_cast<int>(images.size());
                }
                out.push_back(rep);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ReducibleRep& x, const ReducibleRep& y) {
        auto ax = x.disc < 0 ? -x.disc : x.disc, ay = y.disc < 0 ? -y.disc : y.disc;
        if (ax != ay)
            return ax < ay;
        if (x.disc != y.disc)
            return x.disc < y.disc;
        return x.form < y.form;
    });
    return out;
}

} // namespace cubicshape

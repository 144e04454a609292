#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cubicforms.hpp"
#include "errors.hpp"
#include "roots.hpp"

namespace cubicshape {

using Complex = std::complex<double>;

struct LatticeShape {
    Complex tau;
    double iwasawa_t = 1.0; // tau = u + i t^2
    double iwasawa_u = 0.0;
    IntMatrix2 witness;     // det -1 when the final fold to Re >= 0 was applied
};

using EmbeddedBasis = std::array<std::array<LComplex, 3>, 3>; // [root][basis element]

// Images of 1, a xi, a xi^2 + b xi under the three embeddings xi -> xi_i.
inline EmbeddedBasis ring_basis_embeddings(const BinaryCubicForm& f)
{
    if (discriminant(f) == 0)
        throw DegenerateForm("shape needs a nonzero discriminant");
    if (is_reducible(f))
        throw ReducibleForm("ring basis embedding needs an irreducible form");
    // irreducible implies f(1,0) = a != 0, so no translate is needed
    auto xs = roots(f);
    for (const auto& x : xs) {
        LComplex fx = ((LComplex(f.a) * x + LComplex(f.b)) * x + LComplex(f.c)) * x + LComplex(f.d);
        long double scale = std::abs(f.a) * std::pow(std::abs(x), 3) + std::abs(f.b) * std::norm(x) +
                            std::abs(f.c) * std::abs(x) + std::abs(f.d);
        if (!(std::abs(fx) <= 1e-14L * scale))
            throw RootFindingFailure("root residual above 1e-14");
    }
    EmbeddedBasis out;
    for (int i = 0; i < 3; ++i) {
        const LComplex x = xs[i];
        out[i] = {LComplex(1), LComplex(f.a) * x, LComplex(f.a) * x * x + LComplex(f.b) * x};
    }
    return out;
}

namespace detail {

inline constexpr double kBoundaryEps = 1e-12;

} // namespace detail

// SL2(Z) reduction with the usual boundary choices: Re tau = +1/2 rather
// than -1/2, and Re tau >= 0 on the unit circle.
inline std::pair<Complex, IntMatrix2> reduce_to_fundamental(Complex tau0)
{
    if (!(tau0.imag() > 0.0))
        throw std::domain_error("tau must lie in the upper half plane");
    using detail::kBoundaryEps;
    std::complex<long double> tau(tau0.real(), tau0.imag());
    IntMatrix2 g; // tau = g . tau0
    for (int it = 0; it < 10000; ++it) {
        long double n = std::floor(tau.real() + 0.5L);
        if (n != 0) {
            tau -= n;
            g = IntMatrix2{1, -static_cast<std::int64_t>(n), 0, 1} * g;
        }
        if (std::norm(tau) < 1.0L - kBoundaryEps) {
            tau = -1.0L / tau;
            g = IntMatrix2{0, -1, 1, 0} * g;
            continue;
        }
        break;
    }
    if (tau.real() < -0.5L + kBoundaryEps) {
        tau += 1.0L;
        g = IntMatrix2{1, 1, 0, 1} * g;
    }
    if (std::abs(std::norm(tau) - 1.0L) < kBoundaryEps && tau.real() < 0) {
        tau = -1.0L / tau;
        g = IntMatrix2{0, -1, 1, 0} * g;
    }
    return {Complex(double(tau.real()), double(tau.imag())), g};
}

// tau of the plane lattice with Gram matrix [[g11, g12], [g12, g22]].
inline Complex tau_from_gram(long double g11, long double g12, long double g22)
{
    long double det = g11 * g22 - g12 * g12;
    if (!(g11 > 0) || !(det > 0))
        throw RootFindingFailure("Gram matrix is not positive definite");
    return Complex(double(g12 / g11), double(std::sqrt(det) / g11));
}

// Gram matrix of the two nontrivial basis vectors projected orthogonally to 1.
inline std::array<long double, 3> projected_gram(const EmbeddedBasis& e)
{
    std::array<std::array<LComplex, 3>, 2> v;
    for (int k = 0; k < 2; ++k) {
        LComplex trace = e[0][k + 1] + e[1][k + 1] + e[2][k + 1];
        for (int i = 0; i < 3; ++i)
            v[k][i] = e[i][k + 1] - trace / 3.0L;
    }
    auto inner = [](const std::array<LComplex, 3>& x, const std::array<LComplex, 3>& y) {
        LComplex s = 0;
        for (int i = 0; i < 3; ++i)
            s += x[i] * std::conj(y[i]);
        return s.real();
    };
    return {inner(v[0], v[0]), inner(v[0], v[1]), inner(v[1], v[1])};
}

// Reduced point with the GL2 fold tau -> -conj(tau) into Re tau >= 0.
inline LatticeShape shape_from_tau(Complex tau0)
{
    auto [tau, g] = reduce_to_fundamental(tau0);
    if (tau.real() < 0.0) {
        tau = -std::conj(tau);
        g = IntMatrix2{-1, 0, 0, 1} * g;
    }
    LatticeShape s;
    s.tau = tau;
    s.iwasawa_u = tau.real();
    s.iwasawa_t = std::sqrt(tau.imag());
    s.witness = g;
    return s;
}

inline LatticeShape shape(const BinaryCubicForm& f)
{
    auto G = projected_gram(ring_basis_embeddings(f));
    return shape_from_tau(tau_from_gram(G[0], G[1], G[2]));
}

inline const Complex kHexagonalPoint{0.5, 0.86602540378443864676};

} // namespace cubicshape

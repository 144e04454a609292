#include <gtest/gtest.h>

#include <cubicshape/identities.hpp>
#include <cubicshape/specialfun.hpp>

#include "oracles/frozen.hpp"
#include "oracles/special_oracles.hpp"

using namespace cubicshape;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(Gamma, ElementaryValues)
{
    EXPECT_NEAR(std::abs(gamma_fn(1.0) - 1.0), 0.0, 1e-15);
    EXPECT_LT(rel(gamma_fn(0.5), std::sqrt(kPi)), 1e-14);
    EXPECT_LT(rel(gamma_fn(5.0), 24.0), 1e-14);
}

TEST(Gamma, MatchesFrozenHighPrecision)
{
    EXPECT_LT(rel(gamma_fn({3, 2}), frozen::gamma_3_2i), 1e-13);
    EXPECT_LT(rel(gamma_fn({-2.5, 7}), frozen::gamma_m25_7i), 1e-12);
    EXPECT_LT(rel(gamma_fn({20, -30}), frozen::gamma_20_m30i), 1e-12);
}

TEST(Gamma, MatchesStirlingOracleOnGrid)
{
    double worst = 0;
    for (double re = -49.5; re <= 50; re += 3.7)
        for (double im = -50; im <= 50; im += 6.3) {
            Complex s(re, im);
            if (std::abs(s) > 50)
                continue;
            worst = std::max(worst, rel(gamma_fn(s), oracle::gamma(s)));
        }
    EXPECT_LT(worst, 1e-12);
}

TEST(Gamma, PoleRaises)
{
    EXPECT_THROW(gamma_fn(0.0), PoleError);
    EXPECT_THROW(gamma_fn(-3.0), PoleError);
    EXPECT_NO_THROW(gamma_fn(Complex(-3.0, 1e-9)));
}

TEST(Zeta, ElementaryValues)
{
    EXPECT_LT(rel(zeta(2.0), kPi * kPi / 6), 1e-14);
    EXPECT_LT(rel(zeta(0.0), -0.5), 1e-14);
    EXPECT_LT(rel(zeta(-1.0), -1.0 / 12), 1e-13);
    EXPECT_THROW(zeta(1.0), PoleError);
}

TEST(Zeta, MatchesFrozenHighPrecision)
{
    EXPECT_LT(rel(zeta(Complex(1, -1) / 3.0), frozen::zeta_1mi_over_3), 1e-12);
    EXPECT_LT(rel(zeta({-4.5, 10}), frozen::zeta_m45_10i), 1e-10);
    EXPECT_LT(rel(zeta({0.5, 40}), frozen::zeta_half_40i), 1e-10);
}

TEST(Zeta, MatchesEtaOracleInStrip)
{
    double worst = 0;
    for (double re = 0.05; re <= 4; re += 0.37)
        for (double im = -50; im <= 50; im += 7.1) {
            Complex s(re, im);
            worst = std::max(worst, rel(zeta(s), oracle::zeta_borwein(s)));
        }
    EXPECT_LT(worst, 1e-10);
}

TEST(Zeta, FunctionalEquationLeftOfStrip)
{
    // zeta on Re s in [-5, 0) from Euler-Maclaurin vs reflection of the eta oracle
    for (Complex s : {Complex(-4.5, 10), Complex(-2.2, -3), Complex(-0.7, 25)}) {
        Complex refl = std::pow(Complex(2.0), s) * std::pow(Complex(kPi), s - 1.0) * std::sin(kPi * s / 2.0) *
                       oracle::gamma(1.0 - s) * oracle::zeta_borwein(1.0 - s);
        EXPECT_LT(rel(zeta(s), refl), 1e-10) << s;
    }
}

TEST(Xi, Values)
{
    EXPECT_LT(rel(xi(2.0), kPi / 6), 1e-14);
    EXPECT_LT(std::abs(xi(0.3) - xi(0.7)), 1e-10);
    EXPECT_NEAR(std::abs(xi({0, 1}) / xi({1, 1})), 1.0, 1e-10);
    EXPECT_LT(rel(xi({1, 1}), frozen::xi_1_i), 1e-12);
    EXPECT_THROW(xi(0.0), PoleError);
    EXPECT_THROW(xi(1.0), PoleError);
}

TEST(Xi, FunctionalEquationResidualGrid)
{
    int n = 0;
    for (double re : {-3.3, -1.1, 0.2, 0.45, 1.7})
        for (double im : {-11.0, 0.0, 0.4, 7.5}) {
            Complex s(re, im);
            double r = std::abs(xi(s) - xi(1.0 - s)) / std::abs(xi(s));
            EXPECT_LT(r, 1e-10) << s;
            ++n;
        }
    EXPECT_EQ(n, 20);
}

TEST(BesselK, ClosedFormsAndFrozen)
{
    EXPECT_NEAR(bessel_k(0.5, 2.0).real(), std::sqrt(kPi / 4) * std::exp(-2.0), 1e-15);
    EXPECT_NEAR(bessel_k(0.0, 1.0).real(), frozen::k0_at_1, 1e-14);
    EXPECT_NEAR(bessel_k({0, 1}, 1.0).real(), frozen::ki_at_1, 1e-14);
    EXPECT_NEAR(bessel_k({0, 0.5}, 5.44).real(), frozen::k_half_i_at_544, 1e-16);
    EXPECT_LT(rel(bessel_k({2.5, 1}, 0.3), frozen::k_25_1i_at_03), 1e-11);
    EXPECT_LT(rel(bessel_k(0.35, 12.0), frozen::k_035_at_12), 1e-12);
}

TEST(BesselK, ImaginaryOrderIsReal)
{
    for (double r : {0.3, 1.0, 4.0})
        for (double x : {0.1, 1.0, 7.0})
            EXPECT_EQ(bessel_k({0, r}, x).imag(), 0.0);
}

TEST(BesselK, HalfOrderClosedFormAcrossRange)
{
    for (double x : {0.1, 0.5, 3.0, 20.0, 90.0}) {
        double want = std::sqrt(kPi / (2 * x)) * std::exp(-x);
        EXPECT_LT(std::abs(bessel_k(0.5, x).real() - want), 1e-10 * std::max(1.0, want)) << x;
        double want15 = want * (1 + 1 / x);
        EXPECT_LT(std::abs(bessel_k(1.5, x).real() - want15) / want15, 1e-12) << x;
    }
}

TEST(BesselK, UnderflowFlag)
{
    auto r = bessel_k_checked(0.0, 800.0);
    EXPECT_TRUE(r.underflow);
    EXPECT_EQ(r.value, Complex(0.0));
    EXPECT_FALSE(bessel_k_checked(0.0, 600.0).underflow);
}

TEST(EtaDivisor, DirectDefinition)
{
    EXPECT_EQ(eta_divisor({0.3, 0.7}, 1), Complex(1.0));
    EXPECT_NEAR(eta_divisor(0.0, 6).real(), 4.0, 1e-15);
    EXPECT_NEAR(eta_divisor(1.0, 4).real(), 5.25, 1e-15);
    for (std::uint64_t m : {6, 12, 30, 97})
        EXPECT_EQ(eta_divisor({0, 0.8}, m).imag(), 0.0);
}

TEST(EulerProduct, SingleFactor)
{
    auto e = euler_product_main_term(0.0, 2);
    double want = 1 - std::pow(2.0, -5.0 / 3) - std::pow(2.0, -7.0 / 3) + std::pow(2.0, -13.0 / 3);
    EXPECT_NEAR(e.value.real(), want, 1e-15);
}

TEST(EulerProduct, CauchyAndConjugation)
{
    auto a = euler_product_main_term({0, 1}, 10000);
    auto b = euler_product_main_term({0, 1}, 100000);
    EXPECT_LT(std::abs(a.value - b.value), a.tail_bound);
    EXPECT_LT(b.tail_bound, a.tail_bound);
    auto c = euler_product_main_term({0, -1}, 100000);
    EXPECT_LT(std::abs(c.value - std::conj(b.value)), 1e-14);
    EXPECT_THROW(euler_product_main_term({-2.5, 0}, 100), DivergenceError);
}

TEST(Identities, AllPassOnDeclaredGrids)
{
    for (const auto& c : identity_suite())
        EXPECT_TRUE(c.pass) << c.name << " " << c.point << " residual " << c.residual;
}

TEST(SpectralParams, Validation)
{
    auto p = SpectralParams::on_line(1.0);
    EXPECT_NO_THROW(p.validate());
    p.z = 0.0;
    EXPECT_THROW(p.validate(), PoleError);
    p = SpectralParams::on_line(1.0);
    p.tol = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

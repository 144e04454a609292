#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cubicshape/enumerate.hpp"
#include "cubicshape/shapes.hpp"
#include "oracles/form_oracles.hpp"
#include "oracles/frozen.hpp"

using namespace cubicshape;

namespace {

Complex mobius(const IntMatrix2& g, Complex z)
{
    return (double(g.m11) * z + double(g.m12)) / (double(g.m21) * z + double(g.m22));
}

BinaryCubicForm random_irreducible(std::mt19937_64& rng, int box)
{
    std::uniform_int_distribution<int> U(-box, box);
    for (;;) {
        BinaryCubicForm f{U(rng), U(rng), U(rng), U(rng)};
        if (discriminant(f) != 0 && !is_reducible(f))
            return f;
    }
}

IntMatrix2 random_gl2(std::mt19937_64& rng, int moves)
{
    static const IntMatrix2 gens[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, 1}, {0, 1, 1, 0}};
    std::uniform_int_distribution<int> pick(0, 4);
    IntMatrix2 g;
    for (int i = 0; i < moves; ++i)
        g = gens[pick(rng)] * g;
    return g;
}

} // namespace

TEST(RingBasis, RootsOfTheSmallestComplexCubic)
{
    auto e = ring_basis_embeddings({1, 0, -1, -1});
    int real = 0;
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(e[i][0], LComplex(1));
        if (std::fabs(e[i][1].imag()) < 1e-15L) {
            ++real;
            EXPECT_NEAR(double(e[i][1].real()), 1.324717957244746, 1e-14);
        }
    }
    EXPECT_EQ(real, 1);
}

TEST(RingBasis, TraceOfSecondBasisElementIsMinusB)
{
    std::mt19937_64 rng(11);
    for (int n = 0; n < 500; ++n) {
        auto f = random_irreducible(rng, 12);
        auto e = ring_basis_embeddings(f);
        LComplex tr = e[0][1] + e[1][1] + e[2][1];
        EXPECT_NEAR(double(tr.real()), double(-f.b), 1e-12 * (1 + std::abs(f.b))) << f;
        EXPECT_NEAR(double(tr.imag()), 0.0, 1e-12) << f;
    }
}

TEST(RingBasis, RejectsReducibleAndDegenerate)
{
    EXPECT_THROW(ring_basis_embeddings({0, 1, 1, 0}), ReducibleForm);
    EXPECT_THROW(ring_basis_embeddings({1, -3, 3, -1}), DegenerateForm);
    EXPECT_THROW(shape({1, 0, 0, -1}), ReducibleForm);
}

TEST(RingBasis, RootOrderDoesNotMatter)
{
    std::mt19937_64 rng(12);
    for (int n = 0; n < 200; ++n) {
        auto f = random_irreducible(rng, 9);
        auto e = ring_basis_embeddings(f);
        Complex base = shape_from_tau([&] {
                           auto G = projected_gram(e);
                           return tau_from_gram(G[0], G[1], G[2]);
                       }())
                           .tau;
        std::array<int, 3> perm{0, 1, 2};
        while (std::next_permutation(perm.begin(), perm.end())) {
            EmbeddedBasis p{e[perm[0]], e[perm[1]], e[perm[2]]};
            auto G = projected_gram(p);
            EXPECT_LT(std::abs(shape_from_tau(tau_from_gram(G[0], G[1], G[2])).tau - base), 1e-12) << f;
        }
    }
}

TEST(Shape, FrozenValues)
{
    EXPECT_LT(std::abs(shape({1, 0, -1, -1}).tau - frozen::shape_1_0_m1_m1), 1e-9);
    EXPECT_LT(std::abs(shape({1, -1, 1, 2}).tau - frozen::shape_1_m1_1_2), 1e-9);
}

TEST(Shape, InvariantsOfTheReducedPoint)
{
    std::mt19937_64 rng(13);
    for (int n = 0; n < 500; ++n) {
        auto f = random_irreducible(rng, 20);
        auto s = shape(f);
        EXPECT_GT(s.tau.imag(), 0.0);
        EXPECT_GE(s.tau.real(), -1e-12);
        EXPECT_LE(s.tau.real(), 0.5 + 1e-12);
        EXPECT_GE(std::abs(s.tau), 1.0 - 1e-12);
        EXPECT_NEAR(s.iwasawa_u, s.tau.real(), 0.0);
        EXPECT_NEAR(s.iwasawa_t * s.iwasawa_t, s.tau.imag(), 1e-15 * s.tau.imag());
        EXPECT_EQ(std::abs(s.witness.det()), 1);
    }
}

TEST(Shape, GramIsPositiveDefinite)
{
    std::mt19937_64 rng(14);
    for (int n = 0; n < 2000; ++n) {
        auto G = projected_gram(ring_basis_embeddings(random_irreducible(rng, 30)));
        EXPECT_GT(G[0], 0);
        EXPECT_GT(G[0] * G[2] - G[1] * G[1], 0);
    }
}

TEST(Shape, ClassInvariance)
{
    std::mt19937_64 rng(15);
    double worst = 0;
    for (int n = 0; n < 1000; ++n) {
        auto f = random_irreducible(rng, 6);
        auto g = random_gl2(rng, 8);
        Complex t1 = shape(f).tau, t2 = shape(act(g, f)).tau;
        worst = std::max(worst, std::abs(t1 - t2));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Shape, DiscriminantFortyNineIsHexagonal)
{
    auto classes = enumerate_classes(49, +1);
    int maximal = 0;
    for (const auto& c : classes) {
        if (c.disc != 49 || !c.maximal)
            continue;
        ++maximal;
        EXPECT_LT(std::abs(shape(c.rep).tau - kHexagonalPoint), 1e-6) << c.rep;
    }
    EXPECT_EQ(maximal, 1);
}

TEST(Shape, CyclicMaximalClassesAreHexagonal)
{
    auto classes = enumerate_classes(200000, +1);
    int cyclic = 0;
    for (const auto& c : classes) {
        if (!c.maximal || !is_square(c.disc))
            continue;
        ++cyclic;
        EXPECT_LT(std::abs(shape(c.rep).tau - kHexagonalPoint), 1e-6) << c.rep;
    }
    // conductors 7, 9, 13, 19, ... up to 447
    EXPECT_GT(cyclic, 30);
}

TEST(Shape, ScaleFree)
{
    std::mt19937_64 rng(16);
    for (int n = 0; n < 100; ++n) {
        auto G = projected_gram(ring_basis_embeddings(random_irreducible(rng, 10)));
        Complex t = tau_from_gram(G[0], G[1], G[2]);
        for (long double k : {1e-6L, 0.37L, 3.0L, 1e8L})
            EXPECT_LT(std::abs(tau_from_gram(k * G[0], k * G[1], k * G[2]) - t), 1e-13 * std::abs(t));
    }
}

TEST(Reduce, FixedPoints)
{
    auto [t1, g1] = reduce_to_fundamental({0.0, 1.0});
    EXPECT_EQ(t1, Complex(0.0, 1.0));
    EXPECT_EQ(g1, IntMatrix2::identity());
    auto [t2, g2] = reduce_to_fundamental({0.4, 2.0});
    EXPECT_EQ(t2, Complex(0.4, 2.0));
    EXPECT_EQ(g2, IntMatrix2::identity());
}

TEST(Reduce, TranslationInvariance)
{
    Complex z0(0.23, 0.31);
    auto [t0, g0] = reduce_to_fundamental(z0);
    auto [t7, g7] = reduce_to_fundamental(z0 + 7.0);
    EXPECT_LT(std::abs(t0 - t7), 1e-12);
}

TEST(Reduce, BoundaryTieBreaks)
{
    auto [t1, g1] = reduce_to_fundamental({-0.5, 1.5});
    EXPECT_NEAR(t1.real(), 0.5, 1e-15);
    EXPECT_NEAR(t1.imag(), 1.5, 1e-15);
    Complex arc = std::polar(1.0, 2.0);
    auto [t2, g2] = reduce_to_fundamental(arc);
    EXPECT_GE(t2.real(), 0.0);
    EXPECT_NEAR(std::abs(t2), 1.0, 1e-12);
}

TEST(Reduce, WitnessMapsInputToOutput)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> re(-30, 30), im(0.001, 3);
    for (int n = 0; n < 2000; ++n) {
        Complex z(re(rng), im(rng));
        auto [t, g] = reduce_to_fundamental(z);
        EXPECT_EQ(g.det(), 1);
        EXPECT_LT(std::abs(mobius(g, z) - t), 1e-9 * std::abs(t));
        EXPECT_LE(std::abs(t.real()), 0.5 + 1e-12);
        EXPECT_GE(std::abs(t), 1 - 1e-12);
    }
}

TEST(Reduce, RejectsLowerHalfPlane) { EXPECT_THROW(reduce_to_fundamental({0.1, -1.0}), std::domain_error); }

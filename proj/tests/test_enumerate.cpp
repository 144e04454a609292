#include <gtest/gtest.h>

#include <map>
#include <set>

#include <cubicshape/enumerate.hpp>

#include "oracles/form_oracles.hpp"

using namespace cubicshape;

namespace {

std::size_t count_maximal(const std::vector<FormClass>& cls)
{
    std::size_t n = 0;
    for (const auto& c : cls)
        n += c.maximal;
    return n;
}

// Every BFS component holding an irreducible form contains exactly one enumerated rep.
void expect_matches_orbit_oracle(const std::vector<FormClass>& pos, const std::vector<FormClass>& neg,
                                 std::int64_t box, std::int64_t X)
{
    const auto part = oracle::orbit_partition(box, X);
    std::unordered_map<BinaryCubicForm, int, oracle::FormHash> where;
    std::vector<int> irreducible_components(part.components, 0);
    for (std::size_t i = 0; i < part.forms.size(); ++i) {
        where.emplace(part.forms[i], part.component[i]);
        if (!is_reducible(part.forms[i]))
            irreducible_components[part.component[i]] = 1;
    }
    std::vector<int> hits(part.components, 0);
    for (const auto* list : {&pos, &neg})
        for (const auto& c : *list) {
            auto it = where.find(c.rep);
            ASSERT_NE(it, where.end()) << c.rep << " outside the oracle box";
            ++hits[it->second];
        }
    int components = 0;
    for (int id = 0; id < part.components; ++id) {
        if (!irreducible_components[id]) {
            EXPECT_EQ(hits[id], 0);
            continue;
        }
        ++components;
        EXPECT_EQ(hits[id], 1) << "component " << id;
    }
    EXPECT_EQ(static_cast<std::size_t>(components), pos.size() + neg.size());
}

} // namespace

TEST(Enumerate, SmallestNegativeClass)
{
    auto cls = enumerate_classes(25, -1);
    ASSERT_EQ(cls.size(), 1u);
    EXPECT_EQ(cls[0].disc, -23);
    EXPECT_TRUE(cls[0].maximal);
    EXPECT_FALSE(cls[0].reducible);
    EXPECT_EQ(cls[0].stab_order, 1);
    EXPECT_EQ(cls[0].rep, canonicalize({1, 0, -1, -1}).rep);
}

TEST(Enumerate, SmallestPositiveClass)
{
    auto cls = enumerate_classes(49, 1);
    ASSERT_EQ(cls.size(), 1u);
    EXPECT_EQ(cls[0].disc, 49);
    EXPECT_EQ(cls[0].stab_order, 3);
    EXPECT_TRUE(cls[0].maximal);
}

TEST(Enumerate, MatchesOrbitOracleTo500)
{
    expect_matches_orbit_oracle(enumerate_classes(500, 1), enumerate_classes(500, -1), 30, 500);
}

TEST(Enumerate, MatchesOrbitOracleTo2000)
{
    expect_matches_orbit_oracle(enumerate_classes(2000, 1), enumerate_classes(2000, -1), 30, 2000);
}

TEST(Enumerate, ClassInvariantsHold)
{
    for (int sign : {1, -1}) {
        auto cls = enumerate_classes(20000, sign);
        for (const auto& c : cls) {
            ASSERT_TRUE(discriminant(c.rep) == c.disc);
            ASSERT_EQ(c.disc > 0 ? 1 : -1, sign);
            ASSERT_EQ(canonicalize(c.rep).rep, c.rep);
            ASSERT_FALSE(is_reducible(c.rep));
            ASSERT_EQ(c.maximal, is_maximal(c.rep));
            ASSERT_EQ(c.stab_order, stabilizer_order(c.rep));
            if (c.stab_order == 3)
                ASSERT_GT(c.disc, 0);
        }
        EXPECT_TRUE(std::is_sorted(cls.begin(), cls.end(), class_order));
    }
}

TEST(Enumerate, WiderSearchBoxFindsNothingMore)
{
    for (int sign : {1, -1}) {
        EnumerateOptions wide;
        wide.slack = 1.7;
        EXPECT_EQ(enumerate_classes(60000, sign), enumerate_classes(60000, sign, wide)) << sign;
    }
}

TEST(Enumerate, CountsMonotone)
{
    for (int sign : {1, -1}) {
        std::size_t prev = 0;
        for (std::uint64_t X : {10, 50, 100, 300, 1000, 3000}) {
            auto n = enumerate_classes(X, sign).size();
            EXPECT_GE(n, prev);
            prev = n;
        }
    }
}

TEST(Enumerate, FieldCountsMatchKnownTables)
{
    EXPECT_EQ(count_maximal(enumerate_classes(1000, 1)), 27u);
    EXPECT_EQ(count_maximal(enumerate_classes(10000, 1)), 382u);
    EXPECT_EQ(count_maximal(enumerate_classes(100000, 1)), 4804u);
    EXPECT_EQ(count_maximal(enumerate_classes(10000, -1)), 1520u);
    EXPECT_EQ(count_maximal(enumerate_classes(100000, -1)), 17041u);
    EXPECT_EQ(count_maximal(enumerate_classes(1000000, 1)), 54600u);
    EXPECT_EQ(count_maximal(enumerate_classes(1000000, -1)), 182417u);
}

TEST(Enumerate, WorkerCountDoesNotChangeOutput)
{
    for (int sign : {1, -1}) {
        EnumerateOptions many;
        many.workers = 4;
        EXPECT_EQ(enumerate_classes(30000, sign), enumerate_classes(30000, sign, many));
    }
}

TEST(Enumerate, ResumeFromPartialTasks)
{
    std::map<std::size_t, std::vector<FormClass>> seen;
    EnumerateOptions record;
    record.on_task = [&](std::size_t i, const std::vector<FormClass>& cls) { seen[i] = cls; };
    auto full = enumerate_classes(20000, -1, record);
    EnumerateOptions resume;
    std::size_t k = 0;
    for (const auto& [i, cls] : seen)
        if (k++ % 2 == 0)
            resume.resume.emplace(i, cls);
    std::size_t fresh = 0;
    resume.on_task = [&](std::size_t, const std::vector<FormClass>&) { ++fresh; };
    EXPECT_EQ(enumerate_classes(20000, -1, resume), full);
    EXPECT_EQ(fresh, seen.size() - resume.resume.size());
}

TEST(Enumerate, ClassLimitRaisesResourceError)
{
    EnumerateOptions opt;
    opt.max_classes = 100;
    std::size_t reported = 0;
    opt.on_task = [&](std::size_t, const std::vector<FormClass>& cls) { reported += cls.size(); };
    EXPECT_THROW(enumerate_classes(20000, 1, opt), ResourceLimit);
    EXPECT_GT(reported, 100u);
    EXPECT_THROW(enumerate_classes(200000000, 1), ResourceLimit);
}

TEST(Reducible, RegionExample)
{
    auto reps = reducible_representatives(4);
    bool found = false;
    for (const auto& r : reps)
        if (r.form == BinaryCubicForm{0, 1, 0, -1}) {
            found = true;
            EXPECT_EQ(r.disc, 4);
            EXPECT_TRUE(r.square_quadratic);
        }
    EXPECT_TRUE(found);
}

TEST(Reducible, MatchesDirectScan)
{
    auto reps = reducible_representatives(100);
    std::set<BinaryCubicForm> direct;
    for (std::int64_t b = 1; b <= 10; ++b)
        for (std::int64_t c = 0; c < 2 * b; ++c)
            for (std::int64_t d = -200; d <= 200; ++d) {
                auto D = discriminant({0, b, c, d});
                if (D != 0 && D >= -100 && D <= 100)
                    direct.insert({0, b, c, d});
            }
    std::set<BinaryCubicForm> mine;
    for (const auto& r : reps) {
        EXPECT_GE(r.form.b, 1);
        EXPECT_GE(r.form.c, 0);
        EXPECT_LT(r.form.c, 2 * r.form.b);
        EXPECT_EQ(r.form.a, 0);
        EXPECT_TRUE(discriminant(r.form) == r.disc);
        mine.insert(r.form);
    }
    EXPECT_EQ(mine.size(), reps.size());
    EXPECT_EQ(mine, direct);
}

TEST(Reducible, MultiplicityMatchesSpecialOrbitOracle)
{
    const std::int64_t X = 60;
    const auto part = oracle::orbit_partition(40, X, true);
    std::unordered_map<BinaryCubicForm, int, oracle::FormHash> where;
    for (std::size_t i = 0; i < part.forms.size(); ++i)
        where.emplace(part.forms[i], part.component[i]);
    auto reps = reducible_representatives(X);
    std::map<int, int> per_component;
    for (const auto& r : reps) {
        auto it = where.find(r.form);
        ASSERT_NE(it, where.end()) << r.form;
        ++per_component[it->second];
    }
    int squares = 0;
    for (const auto& r : reps) {
        int n = per_component[where.at(r.form)];
        if (!r.square_quadratic) {
            EXPECT_EQ(n, 1) << r.form;
        } else {
            ++squares;
            EXPECT_TRUE(r.multiplicity == 1 || r.multiplicity == 3) << r.form;
            EXPECT_EQ(n, r.multiplicity) << r.form;
        }
    }
    EXPECT_GT(squares, 5);
}

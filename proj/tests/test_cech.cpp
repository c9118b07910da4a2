#include <gtest/gtest.h>

#include "rigidchern/chern_first.hpp"
#include "rigidchern/random.hpp"
#include "support/oracles.hpp"

using namespace rigidchern;

namespace {

const PAdicContext kCtx{5, 6};

ChartedSpace P(int n, PAdicContext ctx = kCtx) { return ChartedSpace(SpaceDescriptor::projective(n, ctx)); }

std::vector<ChartedSpace> spaces() {
    std::vector<ChartedSpace> out;
    out.push_back(P(1));
    out.push_back(P(2));
    out.emplace_back(SpaceDescriptor::bundle(1, {0, 1}, kCtx));
    return out;
}

LaurentSection mono(const ChartedSpace& X, int chart, Exponent e, i64 c) {
    return LaurentSection::monomial(chart, X.dim(), e, PAdicElem::from_int(X.ctx(), c));
}

/// λ·h^k + Δw with w random: a closed cochain whose class is λ.
TotalCochain closed_with_class(const ChartedSpace& X, int k, i64 lambda, Rng& rng) {
    TotalCochain z = scale(X, hyperplane_power(X, k), lambda);
    if (k == 0) return z;
    return add(X, z, random_coboundary(X, 2 * k, rng));
}

} // namespace

TEST(Differentials, SquaresVanishAndCommute) {
    Rng rng(101);
    for (const auto& X : spaces()) {
        for (int t = 0; t < 100; ++t) {
            const int deg = static_cast<int>(rng() % static_cast<u64>(2 * X.dim()));
            TotalCochain z = random_cochain(X, deg, rng);
            EXPECT_TRUE(total_diff(X, total_diff(X, z)).is_zero());
            for (const auto& [p, c] : z.components()) {
                if (p + 2 <= X.max_cech_degree()) {
                    EXPECT_TRUE(delta(X, delta(X, c)).is_zero());
                }
                EXPECT_TRUE(d(X, d(X, c)).is_zero());
                if (p + 1 <= X.max_cech_degree()) {
                    Cochain a = delta(X, d(X, c)), b = d(X, delta(X, c));
                    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_TRUE(a.values[i].equals(b.values[i]));
                }
            }
        }
    }
}

TEST(Differentials, ConstantZeroCochainIsClosed) {
    for (const auto& X : spaces()) EXPECT_TRUE(total_diff(X, scale(X, unit_cochain(X), 7)).is_zero());
}

TEST(Differentials, AlternatingSumOnAnEdge) {
    ChartedSpace X = P(1);
    TotalCochain c(0, X.p(), X.N());
    c.set_form(X, 0, {0}, DiffForm::function(mono(X, 0, Exponent::unit(0), 1)));
    TotalCochain dc = total_diff(X, c);
    // (δc)_{01} = c_1 - c_0 = -t; the d-part is dt = t dlog t on chart 0
    EXPECT_TRUE(dc.find(1)->at(X, {0, 1}).equals(DiffForm::function(mono(X, 0, Exponent::unit(0), -1))));
    EXPECT_TRUE(dc.find(0)->at(X, {0}).equals(DiffForm::basis(mono(X, 0, Exponent::unit(0), 1), 0b1)));
}

TEST(Differentials, TotalDiffOfAOneOneComponent) {
    ChartedSpace X = P(2);
    Rng rng(5);
    TotalCochain z(2, X.p(), X.N());
    TotalCochain full = random_cochain(X, 2, rng);
    z.component(X, 1) = *full.find(1);
    TotalCochain dz = total_diff(X, z);
    Cochain dc = delta(X, *z.find(1)), ddc = d(X, *z.find(1));
    for (std::size_t i = 0; i < dc.values.size(); ++i) EXPECT_TRUE(dz.find(2)->values[i].equals(dc.values[i]));
    for (std::size_t i = 0; i < ddc.values.size(); ++i) EXPECT_TRUE(dz.find(1)->values[i].equals(-ddc.values[i]));
}

TEST(Cup, UnitIsNeutral) {
    Rng rng(7);
    for (const auto& X : spaces())
        for (int deg = 0; deg <= 2; ++deg) {
            TotalCochain b = random_cochain(X, deg, rng);
            EXPECT_TRUE(equals(X, cup(X, unit_cochain(X), b), b));
            EXPECT_TRUE(equals(X, cup(X, b, unit_cochain(X)), b));
        }
}

TEST(Cup, LeibnizRule) {
    Rng rng(8);
    int pairs = 0, nontrivial = 0;
    for (const auto& X : spaces())
        for (int t = 0; t < 17; ++t, ++pairs) {
            const int da = static_cast<int>(rng() % 3), db = static_cast<int>(rng() % 2);
            TotalCochain a = random_cochain(X, da, rng), b = random_cochain(X, db, rng);
            TotalCochain lhs = total_diff(X, cup(X, a, b));
            TotalCochain rhs = add(X, cup(X, total_diff(X, a), b), scale(X, cup(X, a, total_diff(X, b)), da % 2 ? -1 : 1));
            nontrivial += !lhs.is_zero();
            EXPECT_TRUE(equals(X, lhs, rhs)) << X.descriptor().name() << " degrees " << da << "," << db;
        }
    EXPECT_GE(pairs, 50);
    EXPECT_GE(nontrivial, pairs / 2);
}

TEST(Cup, Associative) {
    Rng rng(9);
    for (const auto& X : spaces())
        for (int t = 0; t < 10; ++t) {
            TotalCochain a = random_cochain(X, 1, rng), b = random_cochain(X, static_cast<int>(rng() % 2), rng),
                         c = random_cochain(X, static_cast<int>(rng() % 2), rng);
            EXPECT_TRUE(equals(X, cup(X, cup(X, a, b), c), cup(X, a, cup(X, b, c))));
        }
}

TEST(Cup, GradedCommutativeUpToCoboundary) {
    ChartedSpace X = P(2);
    Rng rng(10);
    for (int t = 0; t < 6; ++t) {
        TotalCochain a = c1_cocycle(X, perturb_lifts(X, line_bundle(X, 1), rng));
        TotalCochain b = add(X, c1_cocycle(X, perturb_lifts(X, line_bundle(X, 2), rng)), random_coboundary(X, 2, rng));
        TotalCochain diff = sub(X, cup(X, a, b), cup(X, b, a));  // |a||b| even
        auto w = solve_coboundary(X, diff);
        ASSERT_TRUE(w.has_value());
        EXPECT_TRUE(equals(X, total_diff(X, w->w), diff));
    }
}

TEST(Cup, TopDegreeExceededOnP1) {
    ChartedSpace X = P(1);
    TotalCochain h = hyperplane_cocycle(X);
    EXPECT_TRUE(cup(X, h, h).is_zero());
}

TEST(Solver, ZeroHasZeroWitness) {
    ChartedSpace X = P(2);
    auto w = solve_coboundary(X, TotalCochain(2, X.p(), X.N()));
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(w->w.is_zero());
}

TEST(Solver, RandomCoboundariesAreSolved) {
    Rng rng(11);
    for (const auto& X : spaces())
        for (int t = 0; t < 15; ++t) {
            const int deg = 1 + static_cast<int>(rng() % static_cast<u64>(2 * X.dim()));
            TotalCochain z = random_coboundary(X, deg, rng);
            auto w = solve_coboundary(X, z);
            ASSERT_TRUE(w.has_value());
            EXPECT_TRUE(w->certified);
            EXPECT_TRUE(equals(X, total_diff(X, w->w), z));
        }
}

TEST(Solver, DlogOnP1IsNotExact) {
    ChartedSpace X = P(1);
    TotalCochain z(2, X.p(), X.N());
    z.set_form(X, 1, {0, 1}, DiffForm::basis(mono(X, 0, Exponent{}, 1), 0b1));
    EXPECT_TRUE(total_diff(X, z).is_zero());
    EXPECT_FALSE(solve_coboundary(X, z).has_value());
    EXPECT_EQ(oracle::raw_residue(X, z), 1u);
}

TEST(Solver, NotClosedThrows) {
    ChartedSpace X = P(1);
    TotalCochain z(0, X.p(), X.N());
    z.set_form(X, 0, {0}, DiffForm::function(mono(X, 0, Exponent::unit(0), 1)));
    EXPECT_THROW(solve_coboundary(X, z), NotClosed);
    EXPECT_THROW(class_coeff(X, z), NotClosed);
}

TEST(ClassCoeff, Normalization) {
    for (int n : {1, 2}) {
        ChartedSpace X = P(n);
        for (int k = 0; k <= n; ++k) EXPECT_EQ(class_coeff(X, hyperplane_power(X, k)).residue(), 1u);
        EXPECT_TRUE(class_coeff(X, TotalCochain(2, X.p(), X.N())).is_zero());
    }
}

TEST(ClassCoeff, ThreeHPlusCoboundary) {
    Rng rng(12);
    for (int n : {1, 2}) {
        ChartedSpace X = P(n);
        for (int t = 0; t < 10; ++t) EXPECT_EQ(class_coeff(X, closed_with_class(X, 1, 3, rng)).signed_lift(), 3);
    }
}

TEST(ClassCoeff, AgreesWithResidueOracle) {
    Rng rng(13);
    for (int n : {1, 2}) {
        ChartedSpace X = P(n);
        for (int t = 0; t < 100; ++t) {
            const int k = static_cast<int>(rng() % static_cast<u64>(n + 1));
            const i64 lambda = detail::uniform(rng, -1000, 1000);
            TotalCochain z = closed_with_class(X, k, lambda, rng);
            PAdicElem c = class_coeff(X, z);
            EXPECT_EQ(c.residue(), oracle::residue_ratio(X, z, hyperplane_power(X, k), c.prec()));
            EXPECT_EQ(c.signed_lift(), lambda);
        }
    }
}

TEST(ClassCoeff, VanishesOnCoboundaries) {
    Rng rng(14);
    int nonzero = 0;
    for (int n : {1, 2}) {
        ChartedSpace X = P(n);
        for (int t = 0; t < 100; ++t) {
            const int k = 1 + static_cast<int>(rng() % static_cast<u64>(n));
            TotalCochain z = random_coboundary(X, 2 * k, rng);
            nonzero += !z.is_zero();
            EXPECT_TRUE(class_coeff(X, z).is_zero());
            EXPECT_EQ(oracle::raw_residue(X, z) % oracle::pow_int(X.p(), X.N()), 0u);
        }
    }
    EXPECT_GE(nonzero, 190);
}

TEST(ClassCoeff, Additive) {
    Rng rng(15);
    ChartedSpace X = P(2);
    for (int t = 0; t < 10; ++t) {
        TotalCochain a = closed_with_class(X, 1, detail::uniform(rng, -50, 50), rng);
        TotalCochain b = c1_cocycle(X, perturb_lifts(X, line_bundle(X, static_cast<int>(detail::uniform(rng, -4, 4))), rng));
        EXPECT_TRUE(class_coeff(X, add(X, a, b)).equals(class_coeff(X, a) + class_coeff(X, b)));
    }
}

TEST(ClassCoeff, RejectsBundlesAndOddDegrees) {
    ChartedSpace B(SpaceDescriptor::bundle(1, {0, 1}, kCtx));
    EXPECT_THROW(class_coeff(B, TotalCochain(2, B.p(), B.N())), UnsupportedSpace);
    ChartedSpace X = P(2);
    EXPECT_THROW(class_coeff(X, TotalCochain(3, X.p(), X.N())), InvalidArgument);
}

TEST(Ranks, ProjectiveSpaces) {
    for (int n : {1, 2}) {
        ChartedSpace X = P(n, PAdicContext{3, 4});
        RankTable T = cohomology_ranks(X, 4);
        std::vector<int> expect(static_cast<std::size_t>(2 * n + 1), 0);
        for (int i = 0; i <= n; ++i) expect[2 * static_cast<std::size_t>(i)] = 1;
        EXPECT_EQ(T.free_ranks, expect);
        EXPECT_EQ(T.rational_ranks, expect);
    }
}

TEST(Ranks, WeightCountMatchesWindowBox) {
    ChartedSpace X = P(2);
    EXPECT_EQ(cohomology_ranks(X, 2).weights, 25);
}

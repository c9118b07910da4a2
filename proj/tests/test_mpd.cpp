#include <gtest/gtest.h>

#include <bit>

#include "rigidchern/mpd.hpp"
#include "rigidchern/random.hpp"
#include "support/oracles.hpp"

using namespace rigidchern;

namespace {

/// n! modulo m by plain multiplication.
u64 factorial_mod(u64 n, u64 m) {
    oracle::i128 acc = 1 % m;
    for (u64 i = 2; i <= n; ++i) acc = acc * i % m;
    return static_cast<u64>(acc);
}

} // namespace

TEST(MpdReduce, FrozenValues) {
    MpdReduction a = mpd_reduce({{2, 8}, 1, 1}, 5);
    EXPECT_EQ(a.q, 2u);
    EXPECT_EQ(a.r, 1u);
    EXPECT_EQ(a.q_factorial.residue(), 2u);
    MpdReduction b = mpd_reduce({{3, 8}, 2, 1}, 19);
    EXPECT_EQ(b.q, 2u);
    EXPECT_EQ(b.r, 1u);
    EXPECT_EQ(b.q_factorial.residue(), 2u);
}

TEST(MpdReduce, LevelZeroIsClassical) {
    for (u64 p : {2u, 3u, 5u})
        for (u64 k = 0; k <= 30; ++k) {
            MpdReduction r = mpd_reduce({{p, 8}, 0, 1}, k);
            EXPECT_EQ(r.q, k);
            EXPECT_EQ(r.r, 0u);
            EXPECT_EQ(r.q_factorial.residue(), factorial_mod(k, oracle::pow_int(p, 8)));
        }
}

TEST(MpdReduce, DivisionAndValuationBookkeeping) {
    for (u64 p : {2u, 3u, 5u})
        for (int m = 0; m <= 3; ++m) {
            MpdContext mc{{p, 8}, m, 1};
            const u64 pm = oracle::pow_int(p, m), mN = oracle::pow_int(p, 8);
            for (u64 k = 0; k <= 200; ++k) {
                MpdReduction r = mpd_reduce(mc, k);
                EXPECT_EQ(r.q * pm + r.r, k);
                EXPECT_LT(r.r, pm);
                EXPECT_EQ(r.factorial_valuation, oracle::vp_factorial_count(p, r.q));
                EXPECT_EQ(r.q_factorial.residue(), factorial_mod(r.q, mN));
                // v_p(q!) + assigned valuation = k at x = p
                EXPECT_EQ(static_cast<i64>(r.factorial_valuation) + assigned_valuation(mc, k), static_cast<i64>(k));
                // q! · x^{{k}_m} = x^k = p^k as residues mod p^N
                u64 lhs = static_cast<u64>(static_cast<oracle::i128>(factorial_mod(r.q, mN)) * mpd_value(mc, k).residue() % mN);
                u64 rhs = k >= 8 ? 0 : oracle::pow_int(p, static_cast<int>(k));
                EXPECT_EQ(lhs, rhs) << "p=" << p << " m=" << m << " k=" << k;
            }
        }
}

TEST(MpdReduce, PowersTendToZero) {
    for (u64 p : {2u, 3u, 5u})
        for (int m = 0; m <= 3; ++m) {
            MpdContext mc{{p, 8}, m, 1};
            const u64 pm = oracle::pow_int(p, m);
            for (u64 k = 1; k <= 400; ++k) {
                const i64 v = assigned_valuation(mc, k);
                EXPECT_GE(v, static_cast<i64>(k) - static_cast<i64>(oracle::vp_factorial_count(p, k)));
                // Legendre: v_p(q!) <= q/(p-1), so v >= k - floor(k/p^m)/(p-1) grows without bound
                EXPECT_GE(v * static_cast<i64>(p - 1), static_cast<i64>(k * (p - 1) - k / pm));
            }
            if (pm * (p - 1) >= 2) {
                EXPECT_GT(assigned_valuation(mc, 400), 190);
            } else {
                // p = 2, m = 0: k - v_2(k!) is the binary digit sum of k and stays bounded
                EXPECT_EQ(assigned_valuation(mc, 400), static_cast<i64>(std::popcount(400u)));
            }
        }
}

TEST(MpdTerm, EvaluateChecksLevel) {
    MpdContext mc{{3, 8}, 1, 1};
    PAdicElem c = PAdicElem::from_int(mc.ctx, 2);
    EXPECT_EQ(evaluate(mc, {c, 4, 1}).residue(), (c * mpd_value(mc, 4)).residue());
    EXPECT_THROW(evaluate(mc, {c, 4, 2}), InvalidArgument);
}

TEST(MpdContext, Validation) {
    EXPECT_THROW((MpdContext{{3, 8}, 7, 1}.validate()), InvalidArgument);
    EXPECT_THROW((MpdContext{{3, 8}, -1, 1}.validate()), InvalidArgument);
    EXPECT_THROW((MpdContext{{3, 8}, 1, 0}.validate()), InvalidArgument);
}

TEST(Psi, Examples) {
    MpdContext mc{{3, 10}, 1, 1};
    EXPECT_TRUE(psi_m(mc, PAdicElem(3, 1, 10)).is_zero());
    PAdicElem v = psi_m(mc, PAdicElem(3, 4, 10));
    EXPECT_GE(v.prec(), 4);
    EXPECT_EQ(v.residue() % 243, 144u);
    EXPECT_EQ(v.residue(), 3 * oracle::log_series(3, 3, 10) % oracle::pow_int(3, 10));
    MpdContext m0{{5, 6}, 0, 1};
    PAdicElem u(5, 1 + 5 * 17, 6);
    EXPECT_TRUE(psi_m(m0, u).equals(log_one_unit(m0.ctx, u)));
    EXPECT_THROW(psi_m(mc, PAdicElem(3, 2, 10)), ValuationError);
}

TEST(Psi, EqualsPowerOfPTimesLog) {
    std::mt19937_64 rng(3);
    int count = 0;
    for (u64 p : {2u, 3u, 5u})
        for (int m = 0; m <= 3; ++m) {
            MpdContext mc{{p, 10}, m, 1};
            const u64 mN = oracle::pow_int(p, 10);
            for (int t = 0; t < 84; ++t, ++count) {
                u64 x = p * (rng() % (mN / p));
                PAdicElem u(p, 1 + x, 10);
                PAdicElem got = psi_m(mc, u);
                u64 expect = static_cast<u64>(static_cast<oracle::i128>(oracle::log_series(p, x, 10)) * oracle::pow_int(p, m) % mN);
                EXPECT_EQ(got.residue(), expect);
            }
        }
    EXPECT_GE(count, 1000);
}

TEST(Psi, HomomorphismOnSections) {
    ChartedSpace X(SpaceDescriptor::projective(2, {3, 8}));
    Rng rng(4);
    for (int m = 0; m <= 2; ++m) {
        MpdContext mc{X.ctx(), m, 1};
        for (int t = 0; t < 5; ++t) {
            LaurentSection a = random_one_unit(X, 0, {0, 1, 2}, rng, {}), b = random_one_unit(X, 0, {0, 1, 2}, rng, {});
            EXPECT_TRUE(psi_m(mc, a * b).equals(psi_m(mc, a) + psi_m(mc, b)));
            EXPECT_TRUE(psi_m(mc, a).equals(a.log_one_unit().scaled(static_cast<i64>(mc.pm()))));
        }
    }
}

TEST(CompatibleLift, LevelZeroIsC1) {
    ChartedSpace X(SpaceDescriptor::projective(2, {5, 8}));
    Rng rng(9);
    LiftedUnitCocycle U = perturb_lifts(X, line_bundle(X, 1), rng);
    EXPECT_TRUE(equals(X, compatible_lift_cocycle(X, U, 0), c1_cocycle(X, U)));
}

TEST(CompatibleLift, TrivialIsZero) {
    ChartedSpace X(SpaceDescriptor::projective(2, {5, 8}));
    for (int m = 0; m <= 3; ++m) EXPECT_TRUE(compatible_lift_cocycle(X, trivial_cocycle(X), m).is_zero());
}

TEST(CompatibleLift, ClassIsLevelIndependent) {
    for (u64 p : {2u, 3u, 5u}) {
        ChartedSpace X(SpaceDescriptor::projective(2, {p, 8}));
        Rng rng(p * 11);
        for (int d : {1, -2}) {
            LiftedUnitCocycle U = perturb_lifts(X, line_bundle(X, d), rng);
            for (int m = 0; m <= 2; ++m) {
                TotalCochain z = compatible_lift_cocycle(X, U, m);
                EXPECT_EQ(z.prec(), 8 - m);
                EXPECT_TRUE(total_diff(X, z).is_zero());
                EXPECT_TRUE(equals(X, z, c1_cocycle(X, U)));
                EXPECT_EQ(class_coeff(X, z).signed_lift(), d);
            }
        }
    }
}

TEST(CompatibleLift, BudgetExhausted) {
    ChartedSpace X(SpaceDescriptor::projective(1, {5, 2}));
    EXPECT_THROW(compatible_lift_cocycle(X, line_bundle(X, 1), 2), PrecisionExhausted);
}

TEST(Rescale, AllTrianglesOfP2) {
    for (u64 p : {2u, 3u, 5u}) {
        ChartedSpace X(SpaceDescriptor::projective(2, {p, 8}));
        Rng rng(p);
        LiftedUnitCocycle U = perturb_lifts(X, line_bundle(X, 1), rng);
        for (auto [m, mp] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
            RescaleReport r = level_rescale_check(X, U, m, mp);
            EXPECT_TRUE(r.pass);
            EXPECT_EQ(r.ratio, oracle::pow_int(p, mp - m));
            EXPECT_EQ(r.triangles.size(), 1u);
            EXPECT_GE(r.precision, 8 - mp - 2);
        }
    }
}

TEST(Rescale, TrivialAndInvalidLevels) {
    ChartedSpace X(SpaceDescriptor::projective(2, {3, 8}));
    RescaleReport r = level_rescale_check(X, trivial_cocycle(X), 1, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_THROW(level_rescale_check(X, trivial_cocycle(X), 2, 2), InvalidArgument);
    EXPECT_THROW(level_rescale_check(X, trivial_cocycle(X), 0, 7), InvalidArgument);
}

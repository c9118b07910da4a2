#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rigidchern/zpn_linalg.hpp"
#include "support/oracles.hpp"

using namespace rigidchern;

namespace {

ZpnMatrix random_matrix(std::mt19937_64& rng, int r, int c, u64 mod) {
    ZpnMatrix A(r, c);
    for (auto& x : A.data) {
        // bias towards non-units so torsion actually shows up
        u64 v = rng() % mod;
        x = (rng() % 3 == 0) ? v : v - v % 2;
    }
    return A;
}

/// Every Z/m-combination of the rows, by enumeration.
std::set<std::vector<u64>> brute_span(const ZpnMatrix& A, u64 mod) {
    std::set<std::vector<u64>> span;
    std::vector<u64> coef(static_cast<std::size_t>(A.rows), 0);
    while (true) {
        std::vector<u64> v(static_cast<std::size_t>(A.cols), 0);
        for (int r = 0; r < A.rows; ++r)
            for (int c = 0; c < A.cols; ++c) v[static_cast<std::size_t>(c)] = (v[static_cast<std::size_t>(c)] + coef[static_cast<std::size_t>(r)] * A.at(r, c)) % mod;
        span.insert(v);
        int i = 0;
        while (i < A.rows && ++coef[static_cast<std::size_t>(i)] == mod) coef[static_cast<std::size_t>(i++)] = 0;
        if (i == A.rows) break;
    }
    return span;
}

std::vector<std::vector<u64>> all_vectors(int n, u64 mod) {
    std::vector<std::vector<u64>> out;
    std::vector<u64> v(static_cast<std::size_t>(n), 0);
    while (true) {
        out.push_back(v);
        int i = 0;
        while (i < n && ++v[static_cast<std::size_t>(i)] == mod) v[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
    }
    return out;
}

/// Rank of an integer matrix by fraction-free elimination in __int128.
int bareiss_rank(std::vector<std::vector<oracle::i128>> A) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    oracle::i128 prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && A[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(A[sel], A[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) A[i][j] = (A[r][c] * A[i][j] - A[i][c] * A[r][j]) / prev;
            A[i][c] = 0;
        }
        prev = A[r][c];
        ++r;
    }
    return static_cast<int>(r);
}

struct Shape {
    u64 p;
    int k, rows, cols;
};

} // namespace

TEST(Howell, MembershipMatchesEnumeration) {
    std::mt19937_64 rng(31);
    for (Shape s : {Shape{2, 3, 3, 3}, Shape{3, 2, 3, 3}, Shape{2, 2, 4, 3}, Shape{5, 1, 3, 4}, Shape{2, 3, 2, 4}}) {
        ZpnRing R(s.p, s.k);
        for (int t = 0; t < 15; ++t) {
            ZpnMatrix A = random_matrix(rng, s.rows, s.cols, R.mod);
            auto span = brute_span(A, R.mod);
            HowellForm H = howell_form(R, A, s.cols);
            for (const auto& b : all_vectors(s.cols, R.mod)) EXPECT_EQ(H.reduce(b).has_value(), span.count(b) == 1);
        }
    }
}

TEST(Howell, TrailingColumnsRecordACombination) {
    std::mt19937_64 rng(32);
    ZpnRing R(3, 2);
    for (int t = 0; t < 20; ++t) {
        ZpnMatrix A = random_matrix(rng, 3, 3, R.mod);
        ZpnMatrix Aug(3, 6);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) Aug.at(r, c) = A.at(r, c);
            Aug.at(r, 3 + r) = 1;
        }
        HowellForm H = howell_form(R, Aug, 3);
        for (const auto& b : brute_span(A, R.mod)) {
            auto lam = H.reduce(b);
            ASSERT_TRUE(lam.has_value());
            for (int c = 0; c < 3; ++c) {
                u64 s = 0;
                for (int r = 0; r < 3; ++r) s = (s + (*lam)[static_cast<std::size_t>(r)] * A.at(r, c)) % R.mod;
                EXPECT_EQ(s, b[static_cast<std::size_t>(c)]);
            }
        }
    }
}

TEST(Smith, ImageSizeMatchesEnumeration) {
    std::mt19937_64 rng(33);
    for (Shape s : {Shape{2, 3, 3, 3}, Shape{3, 2, 3, 4}, Shape{2, 2, 4, 3}, Shape{5, 2, 2, 3}}) {
        ZpnRing R(s.p, s.k);
        for (int t = 0; t < 20; ++t) {
            ZpnMatrix A = random_matrix(rng, s.rows, s.cols, R.mod);
            u64 size = 1;
            for (int v : smith_valuations(R, A)) size *= oracle::pow_int(s.p, s.k - v);
            EXPECT_EQ(size, brute_span(A, R.mod).size());
        }
    }
}

TEST(Smith, DiagonalIsReadOff) {
    ZpnRing R(3, 4);
    ZpnMatrix A(3, 3);
    A.at(0, 0) = 9;
    A.at(1, 1) = 1;
    A.at(2, 2) = 0;
    auto v = smith_valuations(R, A);
    std::sort(v.begin(), v.end());
    EXPECT_EQ(v, (std::vector<int>{0, 2}));
}

TEST(LargePrimeRank, MatchesFractionFreeElimination) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 200; ++t) {
        int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
        std::vector<std::vector<i64>> M(static_cast<std::size_t>(r), std::vector<i64>(static_cast<std::size_t>(c)));
        std::vector<std::vector<oracle::i128>> W(static_cast<std::size_t>(r), std::vector<oracle::i128>(static_cast<std::size_t>(c)));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                i64 x = static_cast<i64>(rng() % 5) - 2;
                if (rng() % 2) x = 0;
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x;
                W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x;
            }
        // duplicate a row sometimes to force dependence
        if (r > 1 && rng() % 2) {
            M.back() = M.front();
            W.back() = W.front();
        }
        EXPECT_EQ(rank_over_large_prime(M), bareiss_rank(W));
    }
}

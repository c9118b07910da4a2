#pragma once

/**
 * @file zpn_linalg.hpp
 * @brief Dense linear algebra over the chain ring Z/p^k.
 *
 * Howell normal form gives exact image-membership certificates; Smith
 * valuations (minimal-valuation pivoting) give the module structure; rank
 * over a large prime field of the lifted integer matrix is an independent
 * cross-check for free ranks.
 */

#include <algorithm>
#include <optional>
#include <vector>

#include "rigidchern/errors.hpp"
#include "rigidchern/padic.hpp"

namespace rigidchern {

struct ZpnRing {
    u64 p = 2;
    int k = 1;
    u64 mod = 2;

    ZpnRing(u64 p_, int k_) : p(p_), k(k_), mod(detail::ipow(p_, k_)) {}

    int valuation(u64 x) const { return x == 0 ? k : detail::valuation_u64(p, x); }
    u64 reduce(i64 v) const { return detail::reduce_signed(v, mod); }
    u64 add(u64 a, u64 b) const { return detail::addmod(a, b, mod); }
    u64 sub(u64 a, u64 b) const { return detail::submod(a, b, mod); }
    u64 mul(u64 a, u64 b) const { return detail::mulmod(a, b, mod); }
    u64 neg(u64 a) const { return a ? mod - a : 0; }
    u64 pow_p(int v) const { return detail::ipow(p, v); }
    /// Inverse of the unit part u of x = p^v u.
    u64 unit_inverse(u64 x) const {
        int v = valuation(x);
        return detail::inv_mod((x / pow_p(v)) % mod, mod);
    }
};

/// Row-major dense matrix of residues.
struct ZpnMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<u64> data;

    ZpnMatrix() = default;
    ZpnMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0) {}

    u64& at(int r, int c) { return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
    u64 at(int r, int c) const { return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
    std::vector<u64> row(int r) const {
        auto b = data.begin() + static_cast<std::ptrdiff_t>(r) * cols;
        return {b, b + cols};
    }
};

/// Howell form of the row span.  Pivots are sought only in the first
/// `pivot_cols` columns; trailing columns ride along (e.g. a transformation
/// record) and never change the pivot structure.
struct HowellForm {
    ZpnRing ring;
    int pivot_cols = 0;
    int width = 0;
    std::vector<std::vector<u64>> rows;  // one per pivot, ordered by pivot column
    std::vector<int> pivot_col;
    std::vector<int> pivot_val;

    /// Reduces b (length pivot_cols) against the form.  On success returns
    /// the trailing-column combination q with b = sum q_i rows_i (leading part).
    std::optional<std::vector<u64>> reduce(std::vector<u64> b) const {
        std::vector<u64> tail(static_cast<std::size_t>(width - pivot_cols), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            int c = pivot_col[i];
            u64 x = b[static_cast<std::size_t>(c)];
            if (x == 0) continue;
            if (ring.valuation(x) < pivot_val[i]) return std::nullopt;
            u64 q = x / ring.pow_p(pivot_val[i]);
            const auto& r = rows[i];
            for (int j = c; j < pivot_cols; ++j) b[static_cast<std::size_t>(j)] = ring.sub(b[static_cast<std::size_t>(j)], ring.mul(q, r[static_cast<std::size_t>(j)]));
            for (int j = pivot_cols; j < width; ++j)
                tail[static_cast<std::size_t>(j - pivot_cols)] = ring.add(tail[static_cast<std::size_t>(j - pivot_cols)], ring.mul(q, r[static_cast<std::size_t>(j)]));
        }
        for (u64 x : b)
            if (x != 0) return std::nullopt;
        return tail;
    }
};

inline HowellForm howell_form(const ZpnRing& ring, const ZpnMatrix& A, int pivot_cols) {
    HowellForm H{ring, pivot_cols, A.cols, {}, {}, {}};
    std::vector<std::vector<u64>> pending;
    pending.reserve(static_cast<std::size_t>(A.rows));
    for (int r = 0; r < A.rows; ++r) {
        auto row = A.row(r);
        for (auto& x : row) x %= ring.mod;
        pending.push_back(std::move(row));
    }
    for (int c = 0; c < pivot_cols; ++c) {
        int best = -1, best_v = ring.k;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            int v = ring.valuation(pending[i][static_cast<std::size_t>(c)]);
            if (v < best_v) {
                best_v = v;
                best = static_cast<int>(i);
                if (v == 0) break;
            }
        }
        if (best < 0) continue;
        std::vector<u64> piv = std::move(pending[static_cast<std::size_t>(best)]);
        pending.erase(pending.begin() + best);
        u64 inv = ring.unit_inverse(piv[static_cast<std::size_t>(c)]);
        for (auto& x : piv) x = ring.mul(x, inv);
        const u64 pv = ring.pow_p(best_v);
        for (auto& r : pending) {
            u64 x = r[static_cast<std::size_t>(c)];
            if (x == 0) continue;
            u64 q = x / pv;
            for (int j = c; j < H.width; ++j) r[static_cast<std::size_t>(j)] = ring.sub(r[static_cast<std::size_t>(j)], ring.mul(q, piv[static_cast<std::size_t>(j)]));
        }
        if (best_v > 0) {
            // annihilator multiple: keeps the span saturated (Howell property)
            std::vector<u64> extra(piv.size());
            u64 ann = ring.pow_p(ring.k - best_v);
            bool nonzero = false;
            for (std::size_t j = 0; j < piv.size(); ++j) {
                extra[j] = ring.mul(piv[j], ann);
                nonzero |= extra[j] != 0;
            }
            if (nonzero) pending.push_back(std::move(extra));
        }
        H.rows.push_back(std::move(piv));
        H.pivot_col.push_back(c);
        H.pivot_val.push_back(best_v);
    }
    // reduce entries above each pivot into [0, p^v)
    for (std::size_t i = 0; i < H.rows.size(); ++i) {
        int c = H.pivot_col[i];
        u64 pv = ring.pow_p(H.pivot_val[i]);
        for (std::size_t j = 0; j < i; ++j) {
            u64 x = H.rows[j][static_cast<std::size_t>(c)];
            u64 q = x / pv;
            if (q == 0) continue;
            for (int t = c; t < H.width; ++t)
                H.rows[j][static_cast<std::size_t>(t)] = ring.sub(H.rows[j][static_cast<std::size_t>(t)], ring.mul(q, H.rows[i][static_cast<std::size_t>(t)]));
        }
    }
    return H;
}

/// Valuations of the nonzero Smith invariants of A over Z/p^k.
inline std::vector<int> smith_valuations(const ZpnRing& ring, ZpnMatrix A) {
    std::vector<int> out;
    int t = 0;
    const int lim = std::min(A.rows, A.cols);
    while (t < lim) {
        int br = -1, bc = -1, bv = ring.k;
        for (int r = t; r < A.rows && bv > 0; ++r)
            for (int c = t; c < A.cols; ++c) {
                int v = ring.valuation(A.at(r, c) % ring.mod);
                if (v < bv) {
                    bv = v;
                    br = r;
                    bc = c;
                    if (v == 0) break;
                }
            }
        if (br < 0) break;
        for (int c = 0; c < A.cols; ++c) std::swap(A.at(t, c), A.at(br, c));
        for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, t), A.at(r, bc));
        u64 inv = ring.unit_inverse(A.at(t, t));
        for (int c = t; c < A.cols; ++c) A.at(t, c) = ring.mul(A.at(t, c), inv);
        const u64 pv = ring.pow_p(bv);
        for (int r = t + 1; r < A.rows; ++r) {
            u64 x = A.at(r, t);
            if (!x) continue;
            u64 q = x / pv;
            for (int c = t; c < A.cols; ++c) A.at(r, c) = ring.sub(A.at(r, c), ring.mul(q, A.at(t, c)));
        }
        // column elimination only touches row t after the row pass
        for (int c = t + 1; c < A.cols; ++c) A.at(t, c) = 0;
        out.push_back(bv);
        ++t;
    }
    return out;
}

/// Rank over F_q (q = 2^61 - 1) of a signed integer matrix.
inline int rank_over_large_prime(const std::vector<std::vector<i64>>& M) {
    constexpr u64 q = (u64{1} << 61) - 1;
    if (M.empty()) return 0;
    const std::size_t rows = M.size(), cols = M[0].size();
    std::vector<std::vector<u64>> A(rows, std::vector<u64>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) A[r][c] = detail::reduce_signed(M[r][c], q);
    int rank = 0;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t sel = pr;
        while (sel < rows && A[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(A[sel], A[pr]);
        u64 inv = detail::inv_mod(A[pr][c], q);
        for (std::size_t r = pr + 1; r < rows; ++r) {
            if (!A[r][c]) continue;
            u64 f = detail::mulmod(A[r][c], inv, q);
            for (std::size_t j = c; j < cols; ++j) A[r][j] = detail::submod(A[r][j], detail::mulmod(f, A[pr][j], q), q);
        }
        ++pr;
        ++rank;
    }
    return rank;
}

} // namespace rigidchern

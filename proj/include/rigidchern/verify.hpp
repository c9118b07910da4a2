#pragma once

/**
 * @file verify.hpp
 * @brief Seeded property suites behind `rigidchern verify`.
 *
 * Cases fan out over worker threads (capped by RIGIDCHERN_THREADS); each
 * case draws from its own generator seeded by (seed, suite, index), and the
 * report is assembled in case order, so output is byte-identical across
 * thread counts.
 */

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "rigidchern/json_io.hpp"
#include "rigidchern/mpd.hpp"
#include "rigidchern/proj_bundle.hpp"
#include "rigidchern/random.hpp"

namespace rigidchern {

struct VerifyConfig {
    PAdicContext ctx{5, 8};
    int window = ChartedSpace::kDefaultWindow;
    u64 seed = 1;
    int cases = 0;  // 0 selects the suite default
    std::optional<SpaceDescriptor> space;
    int level = 2;
    PerturbOptions perturb;
};

struct CaseResult {
    int index = 0;
    bool pass = false;
    int precision = 0;
    json detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CaseResult> results;

    bool pass() const {
        return std::all_of(results.begin(), results.end(), [](const CaseResult& r) { return r.pass; });
    }
    int passed() const {
        return static_cast<int>(std::count_if(results.begin(), results.end(), [](const CaseResult& r) { return r.pass; }));
    }
    int precision() const {
        int k = 1 << 30;
        for (const auto& r : results) k = std::min(k, r.precision);
        return results.empty() ? 0 : k;
    }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"closure", "gauge", "whitney", "frobenius", "mpd", "ranks"};
    return names;
}

inline int worker_count(int jobs) {
    int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("RIGIDCHERN_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return std::max(1, std::min(hw, jobs));
}

/// Generator for one case, independent of scheduling.
inline Rng case_rng(u64 seed, const std::string& suite, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(std::hash<std::string>{}(suite) & 0xffffffffu),
                      static_cast<std::uint32_t>(index)};
    return Rng(seq);
}

/// Runs fn(index) for every case and returns the results in index order.
/// Exceptions inside a case become a failed case carrying the message.
inline std::vector<CaseResult> run_cases(int n, const std::function<CaseResult(int)>& fn) {
    std::vector<CaseResult> out(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (const std::exception& e) {
                out[static_cast<std::size_t>(i)] = CaseResult{i, false, 0, {{"error", e.what()}}};
            }
            out[static_cast<std::size_t>(i)].index = i;
        }
    };
    const int workers = worker_count(n);
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

namespace detail {

inline SpaceDescriptor space_or(const VerifyConfig& cfg, SpaceDescriptor fallback) {
    SpaceDescriptor d = cfg.space.value_or(fallback);
    d.ctx = cfg.ctx;
    return d;
}

inline std::vector<i64> elementary_symmetric(const std::vector<int>& a) {
    std::vector<i64> e(a.size() + 1, 0);
    e[0] = 1;
    for (int x : a)
        for (std::size_t i = e.size() - 1; i >= 1; --i) e[i] += e[i - 1] * x;
    return e;
}

} // namespace detail

/// Δ c1 = 0 and the class of O(d) survives random lift perturbations.
inline SuiteReport suite_closure(const VerifyConfig& cfg) {
    const ChartedSpace X(detail::space_or(cfg, SpaceDescriptor::projective(2, cfg.ctx)), cfg.window);
    if (X.is_bundle()) throw UnsupportedSpace("closure suite runs on P^n");
    const int n = cfg.cases ? cfg.cases : 100;
    return {"closure", run_cases(n, [&](int i) {
                Rng rng = case_rng(cfg.seed, "closure", i);
                const int d = static_cast<int>(detail::uniform(rng, -5, 5));
                TotalCochain z = c1_cocycle(X, perturb_lifts(X, line_bundle(X, d), rng, cfg.perturb));
                const bool closed = total_diff(X, z).is_zero();
                PAdicElem c = class_coeff(X, z);
                const bool ok = closed && c.equals(PAdicElem::from_int(X.ctx(), d, c.prec()));
                return CaseResult{i, ok, c.prec(), {{"twist", d}, {"closed", closed}, {"class", signed_value(c)}}};
            })};
}

/// ζ-witness identity and class invariance under gauge changes.
inline SuiteReport suite_gauge(const VerifyConfig& cfg) {
    const ChartedSpace X(detail::space_or(cfg, SpaceDescriptor::projective(2, cfg.ctx)), cfg.window);
    if (X.is_bundle()) throw UnsupportedSpace("gauge suite runs on P^n");
    const int n = cfg.cases ? cfg.cases : 25;
    return {"gauge", run_cases(n, [&](int i) {
                Rng rng = case_rng(cfg.seed, "gauge", i);
                const int d = static_cast<int>(detail::uniform(rng, -5, 5));
                LiftedUnitCocycle U = perturb_lifts(X, line_bundle(X, d), rng, cfg.perturb);
                GaugeCochain g = random_gauge(X, rng, cfg.perturb);
                LiftedUnitCocycle U2 = apply_gauge(X, U, g, random_corrections(X, rng, cfg.perturb));
                TotalCochain zeta = zeta_witness(X, U, g, U2);
                TotalCochain z1 = c1_cocycle(X, U), z2 = c1_cocycle(X, U2);
                const bool witness = equals(X, total_diff(X, zeta), sub(X, z2, z1));
                PAdicElem c1 = class_coeff(X, z1), c2 = class_coeff(X, z2);
                const bool ok = witness && c1.equals(c2);
                return CaseResult{i, ok, std::min(c1.prec(), c2.prec()),
                                  {{"twist", d}, {"witness", witness}, {"class", signed_value(c1)}, {"class_gauged", signed_value(c2)}}};
            })};
}

/// c(O(a) + O(b)) = c(O(a)) c(O(b)) and the elementary symmetric oracle.
inline SuiteReport suite_whitney(const VerifyConfig& cfg) {
    const int base = cfg.space ? cfg.space->n : 2;
    const int n = cfg.cases ? cfg.cases : 10;
    return {"whitney", run_cases(n, [&](int i) {
                Rng rng = case_rng(cfg.seed, "whitney", i);
                const int a = static_cast<int>(detail::uniform(rng, -3, 3)), b = static_cast<int>(detail::uniform(rng, -3, 3));
                WhitneyReport w = whitney_check(base, {a}, {b}, cfg.ctx, cfg.window);
                auto e = detail::elementary_symmetric({a, b});
                bool oracle = true;
                json c = json::array();
                for (std::size_t k = 0; k < w.sum.c.size(); ++k) {
                    i64 expect = static_cast<int>(k) <= base ? e[k] : 0;
                    oracle = oracle && w.sum.c[k].equals(PAdicElem::from_int(cfg.ctx, expect, w.sum.c[k].prec()));
                    c.push_back(signed_value(w.sum.c[k]));
                }
                return CaseResult{i, w.pass && oracle, w.sum.precision(), {{"twists", {a, b}}, {"c", c}, {"whitney", w.pass}, {"oracle", oracle}}};
            })};
}

/// class(u^p) = p class(u) for line bundles; c_i scale by p^i for split bundles.
inline SuiteReport suite_frobenius(const VerifyConfig& cfg) {
    const ChartedSpace X(detail::space_or(cfg, SpaceDescriptor::projective(2, cfg.ctx)), cfg.window);
    if (X.is_bundle()) throw UnsupportedSpace("frobenius suite runs on P^n");
    const int n = cfg.cases ? cfg.cases : 6;
    const i64 p = static_cast<i64>(cfg.ctx.p);
    return {"frobenius", run_cases(n, [&](int i) {
                Rng rng = case_rng(cfg.seed, "frobenius", i);
                if (i % 2 == 0) {
                    const int d = static_cast<int>(detail::uniform(rng, -5, 5));
                    FrobeniusReport f = frobenius_check(X, perturb_lifts(X, line_bundle(X, d), rng, cfg.perturb));
                    return CaseResult{i, f.pass, f.precision, {{"twist", d}, {"class", signed_value(f.class_u)}, {"class_frobenius", signed_value(f.class_up)}}};
                }
                // p·a must stay within the supported twist range
                const i64 lim = std::min<i64>(3, 9 / p);
                const int a = static_cast<int>(detail::uniform(rng, -lim, lim)), b = static_cast<int>(detail::uniform(rng, -lim, lim));
                ChernVector c = chern_classes(X.dim(), {a, b}, cfg.ctx, cfg.window);
                ChernVector cp = chern_classes(X.dim(), {static_cast<int>(p * a), static_cast<int>(p * b)}, cfg.ctx, cfg.window);
                bool ok = true;
                i64 scale = 1;
                for (std::size_t k = 0; k < c.c.size(); ++k) {
                    ok = ok && cp.c[k].equals(c.c[k] * PAdicElem::from_int(cfg.ctx, scale, c.c[k].prec()));
                    scale *= p;
                }
                return CaseResult{i, ok, std::min(c.precision(), cp.precision()), {{"twists", {a, b}}}};
            })};
}

/// Level-m reduction identity, ψ_m = p^m log, and level rescaling on P^2.
inline SuiteReport suite_mpd(const VerifyConfig& cfg) {
    const int level = cfg.level;
    MpdContext mc{cfg.ctx, level, 1};
    mc.validate();
    const int n = cfg.cases ? cfg.cases : 20;
    const ChartedSpace X(detail::space_or(cfg, SpaceDescriptor::projective(2, cfg.ctx)), cfg.window);
    // case 0: reduction identity; case 1: level rescaling; the rest: ψ_m on random 1-units
    return {"mpd", run_cases(n + 2, [&](int i) {
                Rng rng = case_rng(cfg.seed, "mpd", i);
                if (i == 0) {
                    bool ok = true;
                    for (u64 k = 0; k <= 200; ++k) {
                        MpdReduction r = mpd_reduce(mc, k);
                        ok = ok && r.q * mc.pm() + r.r == k && r.r < mc.pm();
                        ok = ok && static_cast<i64>(r.factorial_valuation) + assigned_valuation(mc, k) == static_cast<i64>(k);
                        // p^k = q! · value(x^{{k}_m}) at x = p
                        PAdicElem lhs(cfg.ctx.p, k < static_cast<u64>(cfg.ctx.N) ? detail::ipow(cfg.ctx.p, static_cast<int>(k)) : 0, cfg.ctx.N);
                        ok = ok && lhs.equals(r.q_factorial * mpd_value(mc, k));
                    }
                    return CaseResult{i, ok, cfg.ctx.N, {{"check", "reduction"}, {"level", level}, {"k_max", 200}}};
                }
                if (i == 1) {
                    if (X.is_bundle()) throw UnsupportedSpace("level rescaling runs on P^n");
                    const int lo = std::max(0, level - 1), hi = std::max(1, level);
                    RescaleReport r = level_rescale_check(X, perturb_lifts(X, line_bundle(X, 1), rng, cfg.perturb), lo, hi);
                    json tri = json::array();
                    for (const auto& t : r.triangles) tri.push_back({{"triangle", t.triangle}, {"pass", t.pass}, {"v_m", t.valuation_low}, {"v_m_prime", t.valuation_high}});
                    return CaseResult{i, r.pass, r.precision, {{"check", "rescale"}, {"m", lo}, {"m_prime", hi}, {"triangles", tri}}};
                }
                const u64 mN = cfg.ctx.modulus(cfg.ctx.N);
                u64 x = cfg.ctx.p * static_cast<u64>(detail::uniform(rng, 0, static_cast<i64>(mN / cfg.ctx.p) - 1));
                u64 y = cfg.ctx.p * static_cast<u64>(detail::uniform(rng, 0, static_cast<i64>(mN / cfg.ctx.p) - 1));
                PAdicElem u(cfg.ctx.p, (1 + x) % mN, cfg.ctx.N), w(cfg.ctx.p, (1 + y) % mN, cfg.ctx.N);
                PAdicElem pm = PAdicElem::from_int(cfg.ctx, static_cast<i64>(mc.pm()), cfg.ctx.N);
                PAdicElem su = psi_m(mc, u);
                const bool scaled = su.equals(pm * log_one_unit(cfg.ctx, u));
                const bool hom = psi_m(mc, u * w).equals(su + psi_m(mc, w));
                return CaseResult{i, scaled && hom, su.prec(), {{"check", "psi"}, {"u", to_json(u)}, {"scaled", scaled}, {"homomorphism", hom}}};
            })};
}

/// Cohomology ranks against the prediction, stable under D -> D + 2.
inline SuiteReport suite_ranks(const VerifyConfig& cfg) {
    std::vector<SpaceDescriptor> spaces;
    if (cfg.space) {
        spaces.push_back(detail::space_or(cfg, *cfg.space));
    } else {
        spaces = {SpaceDescriptor::projective(1, cfg.ctx), SpaceDescriptor::projective(2, cfg.ctx), SpaceDescriptor::bundle(1, {0, 1}, cfg.ctx)};
    }
    return {"ranks", run_cases(static_cast<int>(spaces.size()), [&](int i) {
                const ChartedSpace X(spaces[static_cast<std::size_t>(i)], cfg.window);
                RankReport r = rank_report(X, cfg.window);
                const bool ok = r.stable && r.matches_prediction && r.matches_rational;
                return CaseResult{i, ok, cfg.ctx.N,
                                  {{"space", to_json(X.descriptor())}, {"ranks", r.at_window.free_ranks}, {"ranks_window_plus_2", r.at_window_plus2.free_ranks},
                                   {"rational_ranks", r.at_window.rational_ranks}, {"predicted", r.predicted}}};
            })};
}

inline SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg) {
    if (name == "closure") return suite_closure(cfg);
    if (name == "gauge") return suite_gauge(cfg);
    if (name == "whitney") return suite_whitney(cfg);
    if (name == "frobenius") return suite_frobenius(cfg);
    if (name == "mpd") return suite_mpd(cfg);
    if (name == "ranks") return suite_ranks(cfg);
    throw InvalidArgument("unknown suite '" + name + "'");
}

inline json to_json(const SuiteReport& r, const VerifyConfig& cfg) {
    json cases = json::array();
    for (const auto& c : r.results) cases.push_back({{"case", c.index}, {"pass", c.pass}, {"precision", c.precision}, {"detail", c.detail}});
    return {{"suite", r.suite},
            {"p", cfg.ctx.p},
            {"N", cfg.ctx.N},
            {"D", cfg.window},
            {"seed", cfg.seed},
            {"cases", static_cast<int>(r.results.size())},
            {"passed", r.passed()},
            {"pass", r.pass()},
            {"precision", r.precision()},
            {"results", cases}};
}

} // namespace rigidchern

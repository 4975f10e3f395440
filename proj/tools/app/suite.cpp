#include "suite.hpp"

#include "unilab/error.hpp"
#include "unilab/fft.hpp"
#include "unilab/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

namespace unilab::app {

namespace {

using clock_type = std::chrono::steady_clock;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// ---- 1: spectral path equals direct path --------------------------------------
Criterion c1() {
    Criterion c;
    const auto L = FunctionSpec::liouville();
    const auto Mu = FunctionSpec::moebius();
    const auto one = SequenceSpec::one();
    const auto lam = SequenceSpec::mangoldt();
    struct Case { FunctionSpec f; SequenceSpec a, b; };
    const std::vector<Case> cases = {{L, one, one}, {L, lam, lam}, {Mu, lam, one}};
    c.pass = true;
    double worst = 0.0;
    json rows = json::array();
    for (const auto& k : cases) {
        const auto r = triple_both(k.f, k.a, k.b, 10'000, 32);
        rows.push_back(to_json(r));
        worst = std::max(worst, r.rel_gap);
        if (!(r.rel_gap <= 1e-6)) c.pass = false;
    }
    c.payload = {{"X", 10'000}, {"H", 32}, {"cases", rows}, {"max_rel_gap", worst}};
    c.detail = fmt("max rel gap %.3g", worst);
    return c;
}

// ---- 2: Fejer weights ---------------------------------------------------------
Criterion c2() {
    Criterion c;
    const auto r = triple_direct(FunctionSpec::one(), SequenceSpec::one(), SequenceSpec::one(), 1000, 16);
    const cplx v = *r.value_direct;
    c.pass = v.real() == 16000.0 && v.imag() == 0.0;
    c.payload = to_json(r);
    c.detail = fmt("value %.17g (expected 16000)", v.real());
    return c;
}

// ---- 3: archimedean lower bound -------------------------------------------------
Criterion c3() {
    Criterion c;
    const std::int64_t X = 1'000'000, H = 1000;
    const double base = static_cast<double>(X) * X / (static_cast<double>(H) * H);
    const auto lo = archimedean_demo(0.01 * base, X, H);
    const auto hi = archimedean_demo(0.1 * base, X, H);
    c.pass = lo.U >= 0.9 && hi.U >= 0.8;
    c.payload = {{"t_small", 0.01 * base}, {"t_large", 0.1 * base},
                 {"small", to_json(lo, false)}, {"large", to_json(hi, false)}};
    c.detail = fmt("U(0.01)=%.4f U(0.1)=%.4f", lo.U, hi.U);
    return c;
}

// ---- 4: decay in H and contrast with n^{it} -----------------------------------
Criterion c4() {
    Criterion c;
    const std::int64_t X = 1'000'000;
    ToleranceConfig cfg;
    cfg.seed = 4;
    const auto L = FunctionSpec::liouville();
    const auto u32 = uniformity_statistic(L, X, 32, cfg, 256, 0.01);
    const auto u2048 = uniformity_statistic(L, X, 2048, cfg, 256, 0.01);
    const auto u1000 = uniformity_statistic(L, X, 1000, cfg, 256, 0.01);
    const double t = 0.01 * static_cast<double>(X) * X / 1e6;
    const auto arch = uniformity_statistic(FunctionSpec::archimedean(t), X, 1000, cfg, 256, 0.01);
    c.pass = u2048.U < u32.U && u1000.U <= 0.5 * arch.U;
    c.payload = {{"H32", to_json(u32, false)},
                 {"H2048", to_json(u2048, false)},
                 {"H1000", to_json(u1000, false)},
                 {"archimedean_t", t},
                 {"archimedean_H1000", to_json(arch, false)}};
    c.detail = fmt("U32=%.4f U2048=%.4f", u32.U, u2048.U) + fmt(" U1000=%.4f U(n^it)=%.4f", u1000.U, arch.U);
    return c;
}

// ---- 5: certified sup against a dense grid ----------------------------------
Criterion c5() {
    Criterion c;
    const std::int64_t H = 256;
    const std::size_t N = fft::next_pow2(static_cast<std::size_t>(1000 * H));  // spacing <= 1e-3/H
    std::mt19937_64 rng(5);
    std::vector<Interval> ivs(100);
    for (auto& I : ivs) I = {static_cast<std::int64_t>(100'000 + rng() % 900'000), H};

    std::vector<double> gaps(ivs.size()), sups(ivs.size()), oracles(ivs.size());
    std::vector<int> dominated(ivs.size());
    parallel_for(ivs.size(), [&](std::size_t i) {
        const auto vals = interval_values(FunctionSpec::liouville(), ivs[i]);
        const auto cert = sup_alpha_coeffs(vals, 0.01);
        std::vector<cplx> buf(N, 0.0);
        std::copy(vals.begin(), vals.end(), buf.begin() + 1);
        fft::forward(buf);
        double best = 0.0;
        for (const auto& z : buf) best = std::max(best, std::abs(z));
        sups[i] = cert.value;
        oracles[i] = best;
        gaps[i] = std::abs(cert.value - best);
        dominated[i] = cert.upper_bound >= best ? 1 : 0;
    });
    const double worst = *std::max_element(gaps.begin(), gaps.end());
    const bool dom = std::all_of(dominated.begin(), dominated.end(), [](int d) { return d == 1; });
    c.pass = worst <= 0.02 * static_cast<double>(H) && dom;
    c.payload = {{"H", H}, {"grid", N}, {"sup", sups}, {"oracle", oracles}, {"max_gap", worst},
                 {"upper_bound_dominates", dom}};
    c.detail = fmt("max |sup - oracle| = %.4g (limit %.3g)", worst, 0.02 * static_cast<double>(H));
    return c;
}

// ---- 6: mean scales down ----------------------------------------------------------
Criterion c6() {
    Criterion c;
    const std::int64_t H = 1000;
    std::mt19937_64 rng(6);
    std::vector<std::int64_t> xs(100);
    for (auto& x : xs) x = static_cast<std::int64_t>(1'000'000 + rng() % 1'000'000);
    std::vector<double> ratios(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        ratios[i] = msd_check(FunctionSpec::liouville(), xs[i], H, 0.5).normalized;
    });
    const auto zero = msd_check(FunctionSpec::zero(), xs[0], H, 0.5);
    const double worst = *std::max_element(ratios.begin(), ratios.end());
    c.pass = worst <= 10.0 && zero.lhs == 0.0;
    c.payload = {{"H", H}, {"x", xs}, {"ratio", ratios}, {"max_ratio", worst}, {"zero_lhs", zero.lhs}};
    c.detail = fmt("max lhs/H^2 = %.4f, zero lhs = %g", worst, zero.lhs);
    return c;
}

// ---- 7: walk-count margins ------------------------------------------------------------
Criterion c7() {
    Criterion c;
    c.pass = true;
    json graphs = json::array();
    auto check = [&](const SimpleGraph& g, const std::string& label) {
        json e = {{"graph", label}, {"n", g.n}, {"edges", g.edges.size()}};
        json walks = json::array();
        for (unsigned k : {2u, 4u, 6u}) {
            const auto w = walk_count(g, k);
            walks.push_back(to_json(w));
            if (sgn(w.margin) < 0) c.pass = false;
        }
        e["walks"] = walks;
        graphs.push_back(e);
        return walks;
    };
    const auto k5 = check(SimpleGraph::complete(5), "K5");
    for (const auto& w : k5)
        if (w.at("margin").get<std::string>() != "0") c.pass = false;

    std::size_t total_edges = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        // Two scales keep distinct prime ratios further apart than the geometric window.
        const auto fam = build_family(100'000'000, 100, FamilyMode::strict, seed, 4000);
        const auto freqs = assign_frequencies(FunctionSpec::liouville(), fam, 0.1, 0.01);
        GraphOptions opt;
        opt.P1 = 50;
        opt.P2 = 20;
        const auto g = build_graph(freqs, opt);
        total_edges += g.edges.size();
        check(SimpleGraph::from(g), "liouville seed " + std::to_string(seed));
    }
    c.payload = {{"graphs", graphs}, {"liouville_edges", total_edges}};
    c.detail = "21 graphs, " + std::to_string(total_edges) + " liouville edges";
    return c;
}

// ---- 8: nearby prime products -----------------------------------------------------
Criterion c8() {
    Criterion c;
    c.pass = true;
    double cstar = 0.0;
    json rows = json::array();
    for (std::uint64_t P : {50u, 100u, 200u}) {
        const double N = static_cast<double>(P);
        const double window = static_cast<double>(P) * static_cast<double>(P) / N;
        const auto q1 = count_prime_products(2, P, window, 1);
        const auto q3 = count_prime_products(2, P, window, 3);
        const double lp = std::log(static_cast<double>(P));
        const double scale = std::pow(static_cast<double>(P), 4) / (N * std::pow(lp, 4));
        const double ratio = q1.count.get_d() / scale;
        cstar = std::max(cstar, ratio);
        if (q3.count > q1.count) c.pass = false;
        rows.push_back({{"P", P}, {"window", window}, {"count_q1", q1.count.get_str()},
                        {"count_q3", q3.count.get_str()}, {"scale", scale}, {"ratio", ratio}});
    }
    if (!(cstar <= 100.0)) c.pass = false;
    c.payload = {{"rows", rows}, {"C_star", cstar}};
    c.detail = fmt("fitted C* = %.4g", cstar);
    return c;
}

// ---- 9: pretentious distance ---------------------------------------------------------
Criterion c9() {
    Criterion c;
    const auto chi = pretentious_distance(FunctionSpec::char_twist(3, 1, 0.0), 10'000, 3, 10.0, 1e-6);
    const auto arch = pretentious_distance(FunctionSpec::archimedean(5.0), 10'000, 1, 10.0, 1e-6);
    json mono = json::array();
    bool monotone = true;
    double prev = INFINITY;
    for (std::uint32_t Q : {1u, 3u, 4u, 5u}) {
        const auto r = pretentious_distance(FunctionSpec::liouville(), 10'000, Q, 1000.0, 1e-4);
        if (r.D > prev) monotone = false;
        prev = r.D;
        mono.push_back(to_json(r));
    }
    const double target = 1.0 / std::sqrt(3.0);
    c.pass = std::abs(chi.D - target) <= 0.01 && arch.D <= 0.05 && monotone;
    c.payload = {{"char_twist", to_json(chi)}, {"archimedean", to_json(arch)},
                 {"liouville_by_Q", mono}, {"monotone", monotone}};
    c.detail = fmt("D(chi)=%.6f (1/sqrt3=%.6f) D(arch)=%.3g", chi.D, target, arch.D);
    return c;
}

// ---- 10: averaged two-point correlations ------------------------------------------
Criterion c10() {
    Criterion c;
    std::vector<double> v;
    for (std::int64_t H : {10, 100, 1000})
        v.push_back(averaged_chowla2(FunctionSpec::liouville(), 1'000'000, H).normalized);
    c.pass = v[1] <= v[0] && v[2] <= v[1] && v[2] <= 0.05;
    c.payload = {{"X", 1'000'000}, {"H", {10, 100, 1000}}, {"normalized", v}};
    c.detail = fmt("H=10: %.5f  H=100: %.5f  H=1000: %.5f", v[0], v[1], v[2]);
    return c;
}

// ---- 11: cancellation against the unsigned baseline -------------------------------
Criterion c11() {
    Criterion c;
    const auto lam = SequenceSpec::mangoldt();
    const auto r = triple_direct(FunctionSpec::liouville(), lam, lam, 1'000'000, 100);
    const auto base = triple_direct(FunctionSpec::one(), lam, lam, 1'000'000, 100);
    const double a = std::abs(*r.value_direct);
    const double b = base.value_direct->real();
    c.pass = a <= b / 3.0;
    c.payload = {{"liouville", to_json(r)}, {"one", to_json(base)}, {"ratio", a / b}};
    c.detail = fmt("|lambda| / one = %.5f", a / b);
    return c;
}

// ---- 12: frequency-model recovery ------------------------------------------------
FrequencyAssignment synthetic(std::int64_t X, std::int64_t H, double T0, std::uint32_t q) {
    FrequencyAssignment fa;
    fa.family = build_family(X, H, FamilyMode::dense, 0, 0);
    std::mt19937_64 rng(12);
    for (const auto& I : fa.family.intervals) {
        const double c = static_cast<double>(I.x) + 0.5 * static_cast<double>(H);
        double a = T0 / (2.0 * std::numbers::pi * c);
        if (q > 1) a += static_cast<double>(rng() % q) / q;
        fa.alpha.push_back(a - std::floor(a));
        fa.strength.push_back(1.0);
    }
    return fa;
}

Criterion c12() {
    Criterion c;
    const std::int64_t X = 1'000'000, H = 1000;
    const double t0 = 0.05 * static_cast<double>(X) * X / (static_cast<double>(H) * H);
    const auto fam = build_family(X, H, FamilyMode::dense, 0, 0);
    const auto freqs = assign_frequencies(FunctionSpec::archimedean(t0), fam, 0.5, 0.001);
    FitOptions opt;
    const auto fit = fit_frequency_model(freqs, opt);
    const bool arch_ok = std::abs(fit.T - t0) <= fit.grid_spacing && fit.inlier_fraction >= 0.9;

    const double T0 = 1e4;
    const auto s1 = synthetic(X, H, T0, 1);
    const auto f1 = fit_frequency_model(s1, opt);
    const bool s1_ok = f1.q == 1 && std::abs(f1.T - T0) <= f1.grid_spacing && f1.score == s1.alpha.size();

    const auto s3 = synthetic(X, H, T0, 3);
    const auto f3 = fit_frequency_model(s3, opt);
    bool res_ok = f3.q == 3 && std::abs(f3.T - T0) <= f3.grid_spacing && f3.score == s3.alpha.size();
    std::mt19937_64 rng(12);
    for (std::size_t i = 0; i < s3.alpha.size() && res_ok; ++i)
        if (f3.residues[i] != static_cast<std::int64_t>(rng() % 3)) res_ok = false;

    c.pass = arch_ok && s1_ok && res_ok;
    json summary = to_json(fit);
    summary.erase("residuals");
    summary.erase("residues");
    summary.erase("used");
    c.payload = {{"t0", t0},
                 {"intervals", freqs.alpha.size()},
                 {"archimedean_fit", summary},
                 {"synthetic_q1", {{"T", f1.T}, {"q", f1.q}, {"score", f1.score}}},
                 {"synthetic_q3", {{"T", f3.T}, {"q", f3.q}, {"score", f3.score}, {"residues_exact", res_ok}}}};
    c.detail = fmt("T=%.2f t0=%.2f spacing=%.3g", fit.T, t0, fit.grid_spacing) +
               fmt(" inliers=%.3f", fit.inlier_fraction);
    return c;
}

}  // namespace

std::vector<int> criterion_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}; }

std::string criterion_title(int id) {
    static const std::map<int, std::string> titles = {
        {1, "spectral and direct triple correlations agree"},
        {2, "Fejer-weighted constant correlation equals HX"},
        {3, "archimedean twist keeps large short sums"},
        {4, "Liouville uniformity decays in H"},
        {5, "certified sup matches dense grid"},
        {6, "mean-scales-down ratio bounded"},
        {7, "walk-count margins are nonnegative"},
        {8, "nearby prime products scale"},
        {9, "pretentious distance exact cases and monotonicity"},
        {10, "averaged two-point correlations decay"},
        {11, "Liouville-weighted triple cancels"},
        {12, "frequency model recovered"},
        {13, "payloads identical across thread counts"},
    };
    const auto it = titles.find(id);
    if (it == titles.end()) throw ParameterError("unknown criterion " + std::to_string(id));
    return it->second;
}

Criterion run_criterion(int id) {
    const auto t0 = clock_type::now();
    Criterion c;
    switch (id) {
    case 1: c = c1(); break;
    case 2: c = c2(); break;
    case 3: c = c3(); break;
    case 4: c = c4(); break;
    case 5: c = c5(); break;
    case 6: c = c6(); break;
    case 7: c = c7(); break;
    case 8: c = c8(); break;
    case 9: c = c9(); break;
    case 10: c = c10(); break;
    case 11: c = c11(); break;
    case 12: c = c12(); break;
    default: throw ParameterError("run_criterion handles ids 1..12");
    }
    c.id = id;
    c.title = criterion_title(id);
    c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    // Wall-clock limits, kept out of the payload.
    if (id == 1 && c.seconds >= 10.0) {
        c.pass = false;
        c.detail += " [over 10 s]";
    }
    if (id == 3 && c.seconds >= 120.0) {
        c.pass = false;
        c.detail += " [over 120 s]";
    }
    return c;
}

std::vector<Criterion> run_suite(const std::vector<int>& ids, unsigned threads, unsigned alt_threads) {
    std::vector<int> base;
    bool want13 = false;
    for (int id : ids) {
        if (id == 13) want13 = true;
        else base.push_back(id);
    }
    std::vector<Criterion> out;
    {
        ScopedThreadCount tc(threads);
        for (int id : base) {
            try {
                out.push_back(run_criterion(id));
            } catch (const std::exception& e) {
                Criterion c;
                c.id = id;
                c.title = criterion_title(id);
                c.payload = {{"error", e.what()}};
                c.detail = std::string("error: ") + e.what();
                out.push_back(c);
            }
        }
    }
    if (!want13) return out;

    const auto t0 = clock_type::now();
    std::vector<int> rerun = base;
    std::vector<Criterion> first = out;
    if (rerun.empty()) {
        rerun = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
        ScopedThreadCount tc(threads);
        first.clear();
        for (int id : rerun) {
            try {
                first.push_back(run_criterion(id));
            } catch (const std::exception& e) {
                Criterion c;
                c.id = id;
                c.payload = {{"error", e.what()}};
                first.push_back(c);
            }
        }
    }
    Criterion c13;
    c13.id = 13;
    c13.title = criterion_title(13);
    json mismatches = json::array();
    {
        ScopedThreadCount tc(alt_threads);
        for (std::size_t i = 0; i < rerun.size(); ++i) {
            json again;
            try {
                again = run_criterion(rerun[i]).payload;
            } catch (const std::exception& e) {
                again = {{"error", e.what()}};
            }
            if (again.dump() != first[i].payload.dump()) mismatches.push_back(rerun[i]);
        }
    }
    c13.pass = mismatches.empty();
    c13.payload = {{"threads", {threads, alt_threads}}, {"compared", rerun}, {"mismatches", mismatches}};
    c13.detail = std::to_string(rerun.size()) + " criteria compared at " + std::to_string(threads) +
                 " and " + std::to_string(alt_threads) + " threads, " +
                 std::to_string(mismatches.size()) + " mismatches";
    c13.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    out.push_back(c13);
    return out;
}

}  // namespace unilab::app

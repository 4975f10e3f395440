#include <doctest.h>

#include "oracles.hpp"
#include "unilab/error.hpp"
#include "unilab/proofgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

using namespace unilab;

namespace {

std::vector<std::uint64_t> primes_range(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = lo; p <= hi; ++p)
        if (oracle::is_prime(p)) out.push_back(p);
    return out;
}

double gap(std::int64_t x, std::int64_t y, std::int64_t H, double r) {
    const double lo = r * y, hi = r * (y + H);
    return std::max({0.0, lo - (x + H), x - hi});
}

FrequencyAssignment flat_assignment(const IntervalFamily& fam, double alpha) {
    FrequencyAssignment fa;
    fa.family = fam;
    fa.alpha.assign(fam.intervals.size(), alpha);
    fa.strength.assign(fam.intervals.size(), 1.0);
    return fa;
}

FrequencyAssignment synthetic(std::int64_t X, std::int64_t H, double T0, std::uint32_t q,
                              std::vector<std::int64_t>& residues) {
    FrequencyAssignment fa;
    fa.family = build_family(X, H, FamilyMode::dense, 0, 0);
    std::mt19937_64 rng(99);
    residues.clear();
    for (const auto& I : fa.family.intervals) {
        const double c = I.x + 0.5 * H;
        const auto a = static_cast<std::int64_t>(rng() % q);
        residues.push_back(a);
        const double v = T0 / (2 * std::numbers::pi * c) + static_cast<double>(a) / q;
        fa.alpha.push_back(v - std::floor(v));
        fa.strength.push_back(1.0);
    }
    return fa;
}

}  // namespace

TEST_SUITE("proofgraph") {

TEST_CASE("mean scales down matches its definition") {
    const std::int64_t x = 100'000, H = 300;
    std::vector<cplx> vals;
    for (std::int64_t n = x + 1; n <= x + H; ++n) vals.push_back(oracle::liouville(n));
    cplx S = 0.0;
    for (auto v : vals) S += v;
    double lhs = 0.0;
    for (std::int64_t p = 2; p <= H; ++p) {
        if (!oracle::is_prime(p)) continue;
        cplx inner = 0.0;
        for (std::int64_t n = x + 1; n <= x + H; ++n)
            if (n % p == 0) inner += vals[n - x - 1];
        lhs += p * std::norm(inner - S / static_cast<double>(p));
    }
    const auto r = msd_check(FunctionSpec::liouville(), x, H, 0.5);
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(r.normalized == doctest::Approx(lhs / (H * H)));
    CHECK(r.primes == 62);
    for (auto p : r.exceptional) CHECK(oracle::is_prime(p));
}

TEST_CASE("mean scales down: simple inputs") {
    CHECK(msd_check(FunctionSpec::zero(), 5000, 500, 0.5).lhs == 0.0);
    const auto one = msd_check(FunctionSpec::one(), 12'345, 500, 0.5);
    double sum_p = 0.0;
    for (auto p : primes_range(2, 500)) sum_p += static_cast<double>(p);
    CHECK(one.lhs <= sum_p);
    // the deviation is at most 1, so only p > delta H can be exceptional
    for (auto p : one.exceptional) CHECK(p > 250);
    CHECK(msd_check(FunctionSpec::liouville(), 1'000'000, 1000, 0.5).normalized <= 10.0);
    const auto a = msd_check(FunctionSpec::moebius(), 77'777, 400, 0.3);
    const auto b = msd_check(FunctionSpec::moebius().scaled(unit_phase(0.2)), 77'777, 400, 0.3);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-10));
    CHECK(a.exceptional == b.exceptional);
    CHECK_THROWS_AS(msd_check(FunctionSpec::one(), 10, 100, 0.5), ParameterError);
    CHECK_THROWS_AS(msd_check(FunctionSpec::one(), 1000, 100, 0.0), ParameterError);
}

TEST_CASE("graph on one vertex") {
    const auto fam = build_family(1'000'000, 100, FamilyMode::strict, 1, 1);
    const auto g = build_graph(flat_assignment(fam, 0.0), {});
    CHECK(g.vertices == 1);
    CHECK(g.edges.empty());
    CHECK(g.options.geom_tol == doctest::Approx(100.0 * 100 / 20));
}

TEST_CASE("aligned frequencies keep every geometric pair") {
    const auto fam = build_family(100'000'000, 100, FamilyMode::strict, 3, 2000);
    GraphOptions opt;
    opt.P1 = 50;
    opt.P2 = 20;
    const auto g = build_graph(flat_assignment(fam, 0.0), opt);
    CHECK(g.edges.size() == g.geometric_candidates);
    CHECK(g.geometric_candidates > 0);
    for (const auto& e : g.edges) CHECK(e.residual == 0.0);
}

TEST_CASE("prime-ratio graph against all pairs") {
    const std::int64_t X = 100'000'000, H = 100;
    const auto fam = build_family(X, H, FamilyMode::strict, 1, 1000);
    const auto fa = assign_frequencies(FunctionSpec::liouville(), fam, 0.1, 0.01);
    GraphOptions opt;
    opt.P1 = 50;
    opt.P2 = 20;
    const auto g = build_graph(fa, opt);
    const double gt = 100.0 * H / (50.0 * 20.0), ft = 10.0 * 50 * 50 * 20 / H;
    CHECK(g.options.geom_tol == doctest::Approx(gt));
    CHECK(g.options.freq_tol == doctest::Approx(ft));

    const auto ps = primes_range(50, 100);
    const auto& iv = fa.family.intervals;
    std::set<std::tuple<std::size_t, std::size_t, std::uint64_t, std::uint64_t>> geo, want;
    for (std::size_t i = 0; i < iv.size(); ++i)
        for (std::size_t j = i + 1; j < iv.size(); ++j)
            for (auto p1 : ps)
                for (auto p2 : ps) {
                    if (p1 == p2) continue;
                    // I_i near (p2/p1) I_j, equivalently I_j near (p1/p2) I_i
                    const double r = static_cast<double>(p2) / p1;
                    if (gap(iv[i].x, iv[j].x, H, r) > gt && gap(iv[j].x, iv[i].x, H, 1 / r) > gt) continue;
                    geo.insert({i, j, p1, p2});
                    const double res = p2 * fa.alpha[i] - p1 * fa.alpha[j];
                    if (std::abs(res - std::round(res)) <= ft) want.insert({i, j, p1, p2});
                }
    std::set<std::tuple<std::size_t, std::size_t, std::uint64_t, std::uint64_t>> got;
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& e : g.edges) {
        CHECK(e.i < e.j);
        got.insert({e.i, e.j, e.p1, e.p2});
        CHECK(pairs.insert({e.i, e.j}).second);
        CHECK(e.gap <= gt);
        for (auto pp : e.second_primes) {
            CHECK(pp >= 10);
            CHECK(pp <= 20);
        }
    }
    CHECK(got == want);
    CHECK(g.geometric_candidates == geo.size());
    const double sep = min_ratio_separation(g);
    CHECK(sep > 0.0);
}

TEST_CASE("overlapping dense intervals make ratios ambiguous") {
    const auto fam = build_family(1'000'000, 100, FamilyMode::dense, 0, 0);
    GraphOptions opt;
    opt.P1 = 50;
    CHECK_THROWS_AS(build_graph(flat_assignment(fam, 0.0), opt), InconsistencyError);
}

TEST_CASE("graph csv") {
    PrimeRatioGraph g;
    g.vertices = 3;
    GraphEdge e;
    e.i = 0;
    e.j = 2;
    e.p1 = 53;
    e.p2 = 59;
    g.edges.push_back(e);
    const auto csv = graph_csv(g);
    CHECK(csv.rfind("i,j,p1,p2,gap,residual_mod1,n_primes_ok\n0,2,53,59,", 0) == 0);
    CHECK(dist_to_multiple(7.2, 3.0) == doctest::Approx(1.2));
    CHECK(dist_to_multiple(-0.9, 1.0) == doctest::Approx(0.1));
}

TEST_CASE("walks on complete graphs and paths") {
    for (std::size_t n : {2u, 5u, 9u})
        for (unsigned k : {1u, 2u, 3u, 6u}) {
            const auto w = walk_count(SimpleGraph::complete(n), k);
            mpz_class want = n;
            for (unsigned s = 0; s < k; ++s) want *= static_cast<unsigned long>(n - 1);
            CHECK(w.walks == want);
            CHECK(w.margin == 0);
        }
    const auto p = walk_count(SimpleGraph::path(3), 2);
    CHECK(p.walks == 6);
    CHECK(p.margin == mpq_class(2, 3));
    CHECK_THROWS_AS(walk_count(SimpleGraph::path(3), 17), ParameterError);
    CHECK_THROWS_AS(walk_count(SimpleGraph::path(10'001), 2), ParameterError);
}

TEST_CASE("walks against matrix powers") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        SimpleGraph g;
        g.n = 12;
        for (std::size_t a = 0; a < g.n; ++a)
            for (std::size_t b = a + 1; b < g.n; ++b)
                if (rng() % 3 == 0) g.edges.emplace_back(a, b);
        std::vector<std::vector<mpz_class>> A(g.n, std::vector<mpz_class>(g.n, 0)), P = A;
        for (auto [a, b] : g.edges) A[a][b] = A[b][a] = 1;
        for (std::size_t i = 0; i < g.n; ++i) P[i][i] = 1;
        const unsigned k = 1 + static_cast<unsigned>(rng() % 8);
        for (unsigned s = 0; s < k; ++s) {
            auto Q = P;
            for (auto& row : Q) for (auto& v : row) v = 0;
            for (std::size_t i = 0; i < g.n; ++i)
                for (std::size_t m = 0; m < g.n; ++m)
                    if (P[i][m] != 0)
                        for (std::size_t j = 0; j < g.n; ++j) Q[i][j] += P[i][m] * A[m][j];
            P = Q;
        }
        mpz_class total = 0;
        for (auto& row : P) for (auto& v : row) total += v;
        const auto w = walk_count(g, k);
        CHECK(w.walks == total);
        CHECK(w.degree_sum == static_cast<unsigned long>(2 * g.edges.size()));
        // Cauchy-Schwarz style lower bound holds for symmetric A
        CHECK(w.margin >= 0);
    }
}

TEST_CASE("prime products") {
    const auto c1 = count_prime_products(1, 1000, 1.5, 1);
    CHECK(c1.count == static_cast<unsigned long>(primes_range(1000, 2000).size()));
    CHECK(c1.window == 1);
    for (std::uint64_t P : {50u, 120u}) {
        const auto a = count_prime_products(2, P, 2.0 * P, 1);
        const auto b = count_prime_products(2, P, 2.0 * P, 3);
        CHECK(b.count <= a.count);
    }
}

TEST_CASE("prime products against a quadruple loop") {
    const auto ps = primes_range(50, 100);
    std::uint64_t want = 0;
    for (auto a : ps)
        for (auto b : ps)
            for (auto c : ps)
                for (auto d : ps) {
                    const auto l = a * b, r = c * d;
                    const auto diff = l > r ? l - r : r - l;
                    if (diff <= 100 && l % 3 == r % 3) ++want;
                }
    const auto got = count_prime_products(2, 50, 100.0, 3);
    CHECK(got.count == static_cast<unsigned long>(want));
    CHECK(got.primes == ps.size());
    CHECK_THROWS_AS(count_prime_products(0, 50, 1.0, 1), ParameterError);
    CHECK_THROWS_AS(count_prime_products(2, 50, -1.0, 1), ParameterError);
}

TEST_CASE("mixing counts") {
    const std::vector<Interval> none;
    const auto fam = build_family(1'000'000, 1000, FamilyMode::dense, 0, 0);
    CHECK(mixing_count(none, fam.intervals, 100, 1000, 1'000'000).count == 0);
    const std::vector<Interval> far{{100'000, 1000}}, near{{10'000'000, 1000}};
    CHECK(mixing_count(far, near, 100, 10.0, 1'000'000).count == 0);

    const std::vector<Interval> A1(fam.intervals.begin(), fam.intervals.begin() + 300);
    const std::vector<Interval> A2(fam.intervals.begin() + 200, fam.intervals.begin() + 500);
    const double tol = 100.0 * 1000 / 100;
    const auto ps = primes_range(100, 200);
    std::uint64_t want = 0;
    for (const auto& I1 : A1)
        for (const auto& I2 : A2)
            for (auto p1 : ps)
                for (auto p2 : ps)
                    if (gap(I1.x, I2.x, 1000, static_cast<double>(p2) / p1) <= tol) ++want;
    const auto rep = mixing_count(A1, A2, 100, tol, 1'000'000);
    CHECK(rep.count == want);
    CHECK(rep.fitted_c == doctest::Approx(rep.count / (rep.first_term + rep.second_term)));
}

TEST_CASE("model fit recovers synthetic frequencies") {
    const std::int64_t X = 100'000, H = 100;
    std::vector<std::int64_t> residues;
    for (std::uint32_t q : {1u, 3u}) {
        const double T0 = 3000.0;
        const auto fa = synthetic(X, H, T0, q, residues);
        const auto fit = fit_frequency_model(fa, {});
        CHECK(fit.q == q);
        CHECK(std::abs(fit.T - T0) <= fit.grid_spacing);
        CHECK(fit.score == fa.alpha.size());
        CHECK(fit.inlier_fraction == 1.0);
        CHECK(fit.residues == residues);
        for (double r : fit.residuals) CHECK(r <= 1.0 / (4.0 * H));

        auto shifted = fa;
        for (std::size_t i = 0; i < shifted.alpha.size(); ++i) shifted.alpha[i] += static_cast<double>(i % 5) - 2.0;
        const auto fit2 = fit_frequency_model(shifted, {});
        CHECK(fit2.T == doctest::Approx(fit.T).epsilon(1e-9));
        CHECK(fit2.q == fit.q);
        CHECK(fit2.score == fit.score);
    }
}

TEST_CASE("model fit needs eight intervals") {
    std::vector<std::int64_t> residues;
    auto fa = synthetic(100'000, 100, 1000.0, 1, residues);
    fa.family.intervals.resize(7);
    fa.alpha.resize(7);
    fa.strength.resize(7);
    CHECK_THROWS_AS(fit_frequency_model(fa, {}), EmptyFitError);
    auto weak = synthetic(100'000, 100, 1000.0, 1, residues);
    for (std::size_t i = 7; i < weak.strength.size(); ++i) weak.strength[i] = 0.01;
    FitOptions opt;
    opt.eta = 0.5;
    CHECK_THROWS_AS(fit_frequency_model(weak, opt), EmptyFitError);
}

}

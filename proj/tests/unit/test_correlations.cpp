#include <doctest.h>

#include "oracles.hpp"
#include "unilab/correlations.hpp"
#include "unilab/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace unilab;

namespace {

std::vector<cplx> random_table(std::size_t len, std::size_t lo, std::size_t hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cplx> t(len, 0.0);
    for (std::size_t n = lo; n <= hi && n <= len; ++n) t[n - 1] = cplx(U(rng), U(rng));
    return t;
}

std::vector<cplx> reflect(const std::vector<cplx>& t, std::size_t K) {
    std::vector<cplx> r(K, 0.0);
    for (std::size_t n = 1; n <= K; ++n)
        if (n <= t.size()) r[K - n] = t[n - 1];
    return r;
}

}  // namespace

TEST_SUITE("correlations") {

TEST_CASE("constant sequences give HX") {
    for (auto [X, H] : {std::pair<std::int64_t, std::int64_t>{1000, 16}, {777, 5}, {50, 50}}) {
        const auto r = triple_both(FunctionSpec::one(), SequenceSpec::one(), SequenceSpec::one(), X, H);
        CHECK(r.value_direct->real() == doctest::Approx(static_cast<double>(H * X)).epsilon(1e-14));
        CHECK(r.rel_gap < 1e-10);
        CHECK(r.normalized.real() == doctest::Approx(1.0));
    }
}

TEST_CASE("H = 1 keeps only h = 0") {
    const auto r = triple_both(FunctionSpec::liouville(), SequenceSpec::mangoldt(),
                               SequenceSpec::bounded(FunctionSpec::moebius()), 2000, 1);
    double want = 0.0;
    for (std::int64_t n = 1; n <= 2000; ++n) want += oracle::liouville(n) * oracle::mangoldt(n) * oracle::moebius(n);
    CHECK(r.value_direct->real() == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::abs(*r.value_spectral - *r.value_direct) < 1e-9);
}

TEST_CASE("two point masses pick out one shift") {
    const std::int64_t X = 500, H = 12;
    for (std::int64_t d : {-11, -3, 0, 4, 11}) {
        const std::size_t n0 = 300;
        std::vector<cplx> a(600, 0.0), b(600, 0.0);
        a[n0 - 1] = 1.0;
        b[n0 + d - 1] = 1.0;
        const auto r = triple_both(FunctionSpec::one(), SequenceSpec::custom(a), SequenceSpec::custom(b), X, H);
        const double want = 1.0 - std::abs(static_cast<double>(d)) / H;
        CHECK(r.value_direct->real() == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::abs(*r.value_spectral - want) < 1e-9);
    }
}

TEST_CASE("spectral and direct paths agree") {
    struct Case { FunctionSpec f; SequenceSpec a, b; std::int64_t X, H; };
    std::vector<Case> cases{
        {FunctionSpec::liouville(), SequenceSpec::one(), SequenceSpec::one(), 3000, 20},
        {FunctionSpec::moebius(), SequenceSpec::mangoldt(), SequenceSpec::mangoldt(), 5000, 33},
        {FunctionSpec::archimedean(3.0), SequenceSpec::bounded(FunctionSpec::char_twist(5, 2, 0.0)),
         SequenceSpec::mangoldt(), 4000, 17},
        {FunctionSpec::random_pm1(4), SequenceSpec::custom(random_table(4100, 1, 4100, 1)),
         SequenceSpec::custom(random_table(4200, 1, 4200, 2)), 4000, 40},
    };
    for (const auto& c : cases) {
        const auto r = triple_both(c.f, c.a, c.b, c.X, c.H);
        const double scale = c.X * static_cast<double>(c.H) * 1e-12;
        CHECK(std::abs(*r.value_direct - *r.value_spectral) <= std::max(scale, 1e-10 * std::abs(*r.value_direct)));
    }
}

TEST_CASE("reflecting both sequences preserves the constant-f correlation") {
    const std::int64_t H = 15, K = 900, X = K;
    const auto a = random_table(K, 2 * H + 1, K - 2 * H, 10);
    const auto b = random_table(K, 2 * H + 1, K - 2 * H, 11);
    const auto r1 = triple_direct(FunctionSpec::one(), SequenceSpec::custom(a), SequenceSpec::custom(b), X, H);
    const auto r2 = triple_direct(FunctionSpec::one(), SequenceSpec::custom(reflect(a, K)),
                                  SequenceSpec::custom(reflect(b, K)), X, H);
    CHECK(std::abs(*r1.value_direct - *r2.value_direct) < 1e-9);
    const auto s2 = triple_spectral(FunctionSpec::one(), SequenceSpec::custom(reflect(a, K)),
                                    SequenceSpec::custom(reflect(b, K)), X, H);
    CHECK(std::abs(*r1.value_direct - *s2.value_spectral) < 1e-9);
}

TEST_CASE("triple budget and argument checks") {
    CHECK_THROWS_AS(triple_direct(FunctionSpec::one(), SequenceSpec::one(), SequenceSpec::one(), 100'000'000, 1000),
                    BudgetError);
    CHECK_THROWS_AS(triple_direct(FunctionSpec::one(), SequenceSpec::one(), SequenceSpec::one(), 0, 10), ParameterError);
    CHECK_THROWS_AS(triple_spectral(FunctionSpec::one(), SequenceSpec::one(), SequenceSpec::one(), 10, 0), ParameterError);
    const std::vector<cplx> w3(3), w4(4);
    CHECK_THROWS_AS(window_integral(w3, w4, w3), ParameterError);
}

TEST_CASE("averaged Chowla closed form") {
    for (auto [X, H] : {std::pair<std::int64_t, std::int64_t>{1000, 10}, {5000, 100}}) {
        const double want = chowla2_unimodular_closed_form(X, H);
        CHECK(averaged_chowla2(FunctionSpec::one(), X, H).normalized == doctest::Approx(want).epsilon(1e-10));
        CHECK(averaged_chowla2(FunctionSpec::additive(0.5), X, H).normalized == doctest::Approx(want).epsilon(1e-10));
        // direct count of n <= X with n + h >= 1
        double direct = 0.0;
        for (std::int64_t h = -H; h <= H; ++h) direct += static_cast<double>(std::min<std::int64_t>(X, X + h));
        CHECK(want == doctest::Approx(direct / (static_cast<double>(H) * X)));
    }
}

TEST_CASE("averaged Chowla against the O(XH) sum") {
    const std::int64_t X = 20'000, H = 50;
    const auto r = averaged_chowla2(FunctionSpec::liouville(), X, H);
    REQUIRE(r.inner.size() == static_cast<std::size_t>(2 * H + 1));
    double total = 0.0;
    for (std::int64_t h = -H; h <= H; ++h) {
        double s = 0.0;
        for (std::int64_t n = std::max<std::int64_t>(1, 1 - h); n <= X; ++n) s += oracle::liouville(n) * oracle::liouville(n + h);
        CHECK(r.inner[static_cast<std::size_t>(h + H)] == doctest::Approx(std::abs(s)).epsilon(1e-9));
        total += std::abs(s);
    }
    CHECK(r.normalized == doctest::Approx(total / (static_cast<double>(H) * X)));
    CHECK(r.inner[H] == doctest::Approx(static_cast<double>(X)));

    const auto m = averaged_chowla2(FunctionSpec::moebius(), X, H);
    std::int64_t squarefree = 0;
    for (std::int64_t n = 1; n <= X; ++n) squarefree += oracle::moebius(n) != 0;
    CHECK(m.inner[H] == doctest::Approx(static_cast<double>(squarefree)));
    CHECK(averaged_chowla2(FunctionSpec::liouville(), 1'000'000, 1000).normalized <= 0.05);
}

TEST_CASE("cubic moment of the constant window") {
    const std::int64_t H = 40;
    const auto r = l3_bound_check(SequenceSpec::one(), 1000, H);
    CHECK(r.grid == static_cast<std::size_t>(16 * H));
    // midpoint rule on the Dirichlet kernel, far finer than the library grid
    const int N = 400'000;
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
        const double a = (k + 0.5) / N;
        s += std::pow(std::abs(std::sin(2 * H * std::numbers::pi * a) / std::sin(std::numbers::pi * a)), 3);
    }
    s /= N;
    CHECK(r.integral == doctest::Approx(s).epsilon(2e-3));
    CHECK(r.ratio == doctest::Approx(r.integral / (H * H)));
}

TEST_CASE("cubic moment of a point mass is one") {
    std::vector<cplx> t(200, 0.0);
    t[120] = unit_phase(0.3);
    CHECK(l3_bound_check(SequenceSpec::custom(t), 100, 20).integral == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(l3_integral(t, 100), ParameterError);
}

TEST_CASE("von Mangoldt cubic moment stays bounded") {
    for (std::int64_t x : {10'000, 100'000, 1'000'000}) {
        const auto r = l3_bound_check(SequenceSpec::mangoldt(), x, 1000);
        CHECK(r.ratio <= 20.0);
        CHECK(r.ratio > 0.0);
    }
}

TEST_CASE("Holder chain dominates the correlation") {
    for (const auto& f : {FunctionSpec::liouville(), FunctionSpec::one(), FunctionSpec::random_pm1(2)}) {
        const auto r = holder_chain_check(f, SequenceSpec::mangoldt(), SequenceSpec::one(), 3000, 16);
        CHECK(r.chain_holds);
        CHECK(r.lhs <= r.chain * (1 + 1e-9));
        CHECK(r.sup_integral > 0.0);
        CHECK(r.end_bound > 0.0);
    }
}

TEST_CASE("sequence values") {
    const auto one = sequence_values(SequenceSpec::one(), -3, 2);
    for (auto v : one) CHECK(v == cplx(1.0, 0.0));
    const auto lam = sequence_values(SequenceSpec::mangoldt(), -2, 30);
    for (std::int64_t n = -2; n < 30; ++n)
        CHECK(lam[n + 2].real() == doctest::Approx(n >= 1 ? oracle::mangoldt(n) : 0.0));
    const auto tab = sequence_values(SequenceSpec::custom({1.0, 2.0, 3.0}), 0, 6);
    CHECK(tab == std::vector<cplx>{0.0, 1.0, 2.0, 3.0, 0.0, 0.0});
    CHECK(parse_sequence_spec("Lambda").kind == SequenceSpec::Kind::mangoldt);
    CHECK(parse_sequence_spec("one").kind == SequenceSpec::Kind::one);
    CHECK(parse_sequence_spec("moebius").name() == "moebius");
    CHECK_THROWS_AS(parse_sequence_spec("nonsense"), ParameterError);
    CHECK_THROWS_AS(sequence_values(SequenceSpec::one(), 5, 4), ParameterError);
}

TEST_CASE("csv quoting") {
    const auto r = triple_direct(FunctionSpec::char_twist(3, 1, 0.0), SequenceSpec::one(), SequenceSpec::one(), 100, 4);
    const auto row = correlation_csv_row(r);
    CHECK(row.rfind("100,4,\"char(3,1,0)\",\"one\",\"one\",", 0) == 0);
    CHECK(correlation_csv_header() == "X,H,f,a,b,value_direct,value_spectral,rel_gap,normalized");
}

}

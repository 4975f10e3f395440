#include <doctest.h>

#include "oracles.hpp"
#include "unilab/error.hpp"
#include "unilab/fft.hpp"
#include "unilab/parallel.hpp"
#include "unilab/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace unilab;

namespace {

double grid_sup(const std::vector<cplx>& c, std::size_t N) {
    std::vector<cplx> buf(N, 0.0);
    std::copy(c.begin(), c.end(), buf.begin() + 1);
    fft::forward(buf);
    double best = 0.0;
    for (auto z : buf) best = std::max(best, std::abs(z));
    return best;
}

}  // namespace

TEST_SUITE("uniformity") {

TEST_CASE("strict family layout") {
    const std::int64_t X = 1'000'000, H = 100;
    for (std::uint64_t seed : {1u, 2u, 499u, 500u}) {
        const auto fam = build_family(X, H, FamilyMode::strict, seed);
        CHECK(fam.intervals.size() <= static_cast<std::size_t>(X / H));
        CHECK(fam.intervals.size() == fam.capacity);
        CHECK(fam.v == static_cast<std::int64_t>(seed % 500));
        CHECK(fam.y >= 0);
        CHECK(fam.y < H);
        for (std::size_t i = 0; i < fam.intervals.size(); ++i) {
            const auto& I = fam.intervals[i];
            CHECK(I.H == H);
            CHECK(I.x >= (X + 9) / 10);
            CHECK(I.x + H <= 10 * X);
            CHECK((I.x - fam.y) % H == 0);
            CHECK(((I.x - fam.y) / H) % 500 == fam.v);
            if (i) CHECK(I.x - fam.intervals[i - 1].x == 500 * H);
        }
    }
    CHECK_THROWS_AS(build_family(100'000, 100, FamilyMode::strict, 1), ParameterError);
    CHECK_THROWS_AS(build_family(1'000'000, 100, FamilyMode::strict, 1, 10'000), ParameterError);
}

TEST_CASE("sampled strict families are sorted and spaced") {
    const auto fam = build_family(100'000'000, 1000, FamilyMode::strict, 9, 500);
    REQUIRE(fam.intervals.size() == 500);
    for (std::size_t i = 1; i < fam.intervals.size(); ++i)
        CHECK(fam.intervals[i].x - fam.intervals[i - 1].x >= 500 * 1000);
}

TEST_CASE("dense family tiles from ceil(X/10)") {
    const auto fam = build_family(1001, 10, FamilyMode::dense, 0);
    CHECK(fam.capacity == 100);
    REQUIRE(fam.intervals.size() == 100);
    for (std::size_t i = 0; i < fam.intervals.size(); ++i) {
        CHECK((fam.intervals[i].x - 101) % 10 == 0);
        if (i) CHECK(fam.intervals[i].x >= fam.intervals[i - 1].x + 10);
    }

    const auto three = build_family(1000, 10, FamilyMode::dense, 5, 3);
    REQUIRE(three.intervals.size() == 3);
    for (std::size_t i = 1; i < 3; ++i)
        CHECK(three.intervals[i].x >= three.intervals[i - 1].x + 10);
    for (const auto& I : three.intervals) {
        CHECK(I.x >= 100);
        CHECK(I.x + 10 <= 10'000);
    }
    CHECK_THROWS_AS(build_family(5, 1, FamilyMode::dense, 0), ParameterError);
    CHECK_THROWS_AS(build_family(1000, 0, FamilyMode::dense, 0), ParameterError);
}

TEST_CASE("tolerance validation") {
    ToleranceConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rho = 0.2;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.epsilon = cfg.rho / 50;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.eta = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("constant function has U = 1") {
    ToleranceConfig cfg;
    const auto r = uniformity_statistic(FunctionSpec::one(), 100'000, 64, cfg, 50);
    CHECK(r.M == 50);
    CHECK(r.U == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.q10 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unimodular scaling does not change U") {
    ToleranceConfig cfg;
    cfg.seed = 3;
    const auto a = uniformity_statistic(FunctionSpec::liouville(), 100'000, 128, cfg, 40);
    const auto b = uniformity_statistic(FunctionSpec::liouville().scaled(unit_phase(0.37)), 100'000, 128, cfg, 40);
    CHECK(a.U == doctest::Approx(b.U).epsilon(1e-9));
}

TEST_CASE("U agrees with a dense-grid estimate") {
    const auto fam = build_family(1'000'000, 200, FamilyMode::dense, 11, 40);
    for (const auto& spec : {FunctionSpec::random_pm1(7), FunctionSpec::moebius()}) {
        const double tau = 0.01;
        const auto r = uniformity_statistic(spec, fam, tau);
        double est = 0.0;
        for (const auto& I : fam.intervals) est += grid_sup(interval_values(spec, I), 1 << 17) / 200.0;
        est /= static_cast<double>(fam.intervals.size());
        CHECK(est <= r.U + tau + 1e-12);
        CHECK(r.U <= est + 1e-3);
        for (const auto& rec : r.records) {
            CHECK(rec.value >= 0.0);
            CHECK(rec.value <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("fixed-alpha and archimedean statistics stay below U") {
    const auto fam = build_family(200'000, 128, FamilyMode::dense, 2, 60);
    const double tau = 0.01;
    const auto U = uniformity_statistic(FunctionSpec::liouville(), fam, tau).U;
    const auto fixed = fixed_alpha_statistic(FunctionSpec::liouville(), fam, rational_candidates(6));
    CHECK(fixed.max <= U + tau);

    const double t = 0.01 * 200'000.0 * 200'000.0 / (128.0 * 128.0);
    const auto Ua = uniformity_statistic(FunctionSpec::archimedean(t), fam, tau).U;
    const auto demo = archimedean_demo(t, fam);
    CHECK(demo.U <= Ua + tau);
    CHECK(archimedean_demo(0.0, fam).U == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(archimedean_demo(0.2 * 200'000.0 * 200'000.0 / (128.0 * 128.0), fam), ParameterError);
}

TEST_CASE("rational candidates") {
    const auto r = rational_candidates(4);
    const std::vector<double> want{0.0, 0.25, 1.0 / 3, 0.5, 2.0 / 3, 0.75};
    REQUIRE(r.size() == want.size());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == doctest::Approx(want[i]));
}

TEST_CASE("a real character correlates with its own period") {
    const auto spec = FunctionSpec::char_twist(3, 1, 0.0);
    const auto rep = fixed_alpha_statistic(spec, 10'000, 100, {1.0 / 3, 2.0 / 3});
    CHECK(rep.max >= 1.0 / std::sqrt(3.0) - 0.05);
}

TEST_CASE("liouville at random frequencies is small") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> alphas(64);
    for (auto& a : alphas) a = U(rng);
    const auto rep = fixed_alpha_statistic(FunctionSpec::liouville(), 100'000, 1000, alphas);
    CHECK(rep.max <= 0.2);
}

TEST_CASE("slot scan against an exhaustive scan") {
    const std::int64_t X = 100'000, H = 10, y = 3;
    const std::size_t len = 3 * X;
    // a(n) sits at index n - 1; plant an additive phase on slot 7
    // background of modulus 0.2 stays below the eta*H/2 threshold
    auto data = evaluate(FunctionSpec::random_pm1(5), 1, len + 1);
    for (auto& z : data) z *= 0.2;
    for (std::int64_t l = 0; (500 * l + 7) * H + y + H <= static_cast<std::int64_t>(len); ++l)
        for (std::int64_t m = 1; m <= H; ++m) {
            const std::int64_t n = (500 * l + 7) * H + y + m;
            data[n - 1] = unit_phase(0.3 * static_cast<double>(n));
        }
    const double eta = 0.5, tau = 0.05;
    const auto scan = slot_scan(data, X, H, y, eta, tau);

    const std::int64_t l0 = (X + 500 * H - 1) / (500 * H), l1 = X / (250 * H);
    for (std::size_t v = 0; v < 500; ++v) {
        std::size_t sure = 0, maybe = 0;
        for (std::int64_t l = l0; l <= l1; ++l) {
            const std::int64_t s = (500 * l + static_cast<std::int64_t>(v)) * H + y;
            std::vector<cplx> c(data.begin() + s, data.begin() + s + H);
            const double g = grid_sup(c, 4096);
            sure += g >= eta * H / 2 + tau * H;
            maybe += g + 0.01 * H >= eta * H / 2 - tau * H;
        }
        CHECK(scan.counts[v] >= sure);
        CHECK(scan.counts[v] <= maybe);
    }
    CHECK(scan.best_v == 7);
    CHECK(scan.best_count == static_cast<std::size_t>(l1 - l0 + 1));
    CHECK(scan.guarantee == doctest::Approx(eta * X / (1000.0 * H)));
    CHECK(static_cast<double>(scan.best_count) >= scan.guarantee);
    CHECK_THROWS_AS(slot_scan(std::vector<cplx>(1000), X, H, y, eta), CoverageError);
    CHECK_THROWS_AS(slot_scan(data, X, H, H, eta), ParameterError);
}

TEST_CASE("type-7 quantiles") {
    CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({1, 2, 3, 4}, 0.1) == doctest::Approx(1.3));
    CHECK(quantile({4, 1, 3, 2}, 0.9) == doctest::Approx(3.7));
    CHECK(quantile({5}, 0.3) == 5.0);
    CHECK(quantile({}, 0.5) == 0.0);
    CHECK(quantile({1, 2}, 1.0) == 2.0);
}

TEST_CASE("csv row matches the header") {
    UniformityReport r;
    r.X = 10;
    r.H = 2;
    r.M = 3;
    r.U = 0.5;
    const auto h = uniformity_csv_header();
    const auto row = uniformity_csv_row(r);
    CHECK(h == "X,H,M,seed,tau,U,q10,q50,q90");
    CHECK(std::count(h.begin(), h.end(), ',') == std::count(row.begin(), row.end(), ','));
    CHECK(row.rfind("10,2,3,", 0) == 0);
}

TEST_CASE("results do not depend on the thread count") {
    const auto fam = build_family(1'000'000, 100, FamilyMode::strict, 17);
    UniformityReport a, b;
    {
        ScopedThreadCount t(1);
        a = uniformity_statistic(FunctionSpec::liouville(), fam, 0.02);
    }
    {
        ScopedThreadCount t(4);
        b = uniformity_statistic(FunctionSpec::liouville(), fam, 0.02);
    }
    CHECK(a.U == b.U);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].alpha == b.records[i].alpha);
        CHECK(a.records[i].value == b.records[i].value);
    }
}

}

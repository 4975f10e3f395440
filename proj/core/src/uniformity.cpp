#include "unilab/uniformity.hpp"

#include "unilab/error.hpp"
#include "unilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

namespace unilab {

const char* to_string(FamilyMode mode) { return mode == FamilyMode::strict ? "strict" : "dense"; }

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

struct Lattice {
    std::int64_t first = 0;  // left endpoint of slot 0
    std::int64_t stride = 0;
    std::size_t slots = 0;
    std::int64_t y = 0;
    std::int64_t v = 0;
};

void check_xh(std::int64_t X, std::int64_t H) {
    if (X < 10 || H < 1) throw ParameterError("family requires X >= 10 and H >= 1");
}

Lattice lattice(std::int64_t X, std::int64_t H, FamilyMode mode, std::uint64_t seed) {
    check_xh(X, H);
    Lattice lat;
    const std::int64_t lo = ceil_div(X, 10);
    const std::int64_t hi = 10 * X;
    if (mode == FamilyMode::strict) {
        if (H > X / 10'000) throw ParameterError("strict family requires H <= X/1e4");
        std::mt19937_64 rng(seed);
        lat.y = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(H));
        lat.v = static_cast<std::int64_t>(seed % 500);
        lat.stride = 500 * H;
        const std::int64_t base = lat.v * H + lat.y;
        const std::int64_t l0 = ceil_div(lo - base, lat.stride);
        const std::int64_t l1 = floor_div(hi - H - base, lat.stride);
        lat.first = l0 * lat.stride + base;
        lat.slots = l1 >= l0 ? static_cast<std::size_t>(l1 - l0 + 1) : 0;
    } else {
        lat.stride = H;
        lat.first = lo;
        lat.slots = hi - H >= lo ? static_cast<std::size_t>((hi - H - lo) / H + 1) : 0;
    }
    return lat;
}

}  // namespace

std::size_t family_capacity(std::int64_t X, std::int64_t H, FamilyMode mode, std::uint64_t seed) {
    const auto lat = lattice(X, H, mode, seed);
    return std::min<std::size_t>(lat.slots, static_cast<std::size_t>(X / H));
}

IntervalFamily build_family(std::int64_t X, std::int64_t H, FamilyMode mode, std::uint64_t seed,
                            std::size_t M) {
    const auto lat = lattice(X, H, mode, seed);
    IntervalFamily fam;
    fam.X = X;
    fam.H = H;
    fam.mode = mode;
    fam.y = lat.y;
    fam.v = lat.v;
    fam.seed = seed;
    fam.capacity = std::min<std::size_t>(lat.slots, static_cast<std::size_t>(X / H));
    if (M > fam.capacity)
        throw ParameterError("requested " + std::to_string(M) + " intervals but the family holds " +
                             std::to_string(fam.capacity));
    if (M == 0) M = fam.capacity;

    std::vector<std::size_t> slots;
    if (M == lat.slots) {
        slots.resize(M);
        std::iota(slots.begin(), slots.end(), std::size_t{0});
    } else {
        std::mt19937_64 rng(seed ^ 0x5bd1e995u);
        for (std::size_t i = 0; i < M; ++i) {
            const std::size_t a = i * lat.slots / M;
            const std::size_t b = (i + 1) * lat.slots / M;
            slots.push_back(a + static_cast<std::size_t>(rng() % (b - a)));
        }
    }
    for (std::size_t s : slots)
        fam.intervals.push_back({lat.first + static_cast<std::int64_t>(s) * lat.stride, H});
    return fam;
}

void ToleranceConfig::validate() const {
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0, 1)");
    if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("theta must lie in (0, 1)");
    if (!(rho > 0.0 && rho < 0.125)) throw ParameterError("rho must lie in (0, 1/8)");
    if (!(epsilon > 0.0 && epsilon < rho / 100.0)) throw ParameterError("epsilon must lie in (0, rho/100)");
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
}

std::string uniformity_csv_header() { return "X,H,M,seed,tau,U,q10,q50,q90"; }

std::string uniformity_csv_row(const UniformityReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%lld,%lld,%zu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g",
                  static_cast<long long>(r.X), static_cast<long long>(r.H), r.M,
                  static_cast<unsigned long long>(r.seed), r.tau, r.U, r.q10, r.q50, r.q90);
    return buf;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
}

namespace {

void summarise(UniformityReport& rep) {
    std::vector<double> vals;
    vals.reserve(rep.records.size());
    double sum = 0.0;
    for (const auto& r : rep.records) {
        vals.push_back(r.value);
        sum += r.value;
    }
    rep.M = rep.records.size();
    rep.U = rep.M ? sum / static_cast<double>(rep.M) : 0.0;
    rep.q10 = quantile(vals, 0.1);
    rep.q50 = quantile(vals, 0.5);
    rep.q90 = quantile(vals, 0.9);
}

}  // namespace

UniformityReport uniformity_statistic(const FunctionSpec& spec, const IntervalFamily& family,
                                      double tau) {
    UniformityReport rep;
    rep.X = family.X;
    rep.H = family.H;
    rep.seed = family.seed;
    rep.tau = tau;
    rep.records.resize(family.intervals.size());
    const double H = static_cast<double>(family.H);
    parallel_for(family.intervals.size(), [&](std::size_t i) {
        const auto& I = family.intervals[i];
        const auto cert = sup_alpha(spec, I, tau);
        rep.records[i] = {I.x, cert.alpha_star, cert.value / H};
    });
    summarise(rep);
    return rep;
}

UniformityReport uniformity_statistic(const FunctionSpec& spec, std::int64_t X, std::int64_t H,
                                      const ToleranceConfig& cfg, std::size_t M, double tau) {
    cfg.validate();
    if (M == 0) M = std::min<std::size_t>(static_cast<std::size_t>(X / H), 512);
    const auto fam = build_family(X, H, FamilyMode::dense, cfg.seed, M);
    return uniformity_statistic(spec, fam, tau);
}

FixedAlphaReport fixed_alpha_statistic(const FunctionSpec& spec, const IntervalFamily& family,
                                       const std::vector<double>& alphas) {
    if (alphas.empty()) throw ParameterError("fixed_alpha_statistic needs at least one candidate");
    if (family.intervals.empty()) throw ParameterError("fixed_alpha_statistic needs a nonempty family");
    const std::size_t N = family.intervals.size();
    const std::size_t A = alphas.size();
    std::vector<double> table(N * A);
    parallel_for(N, [&](std::size_t i) {
        const auto& I = family.intervals[i];
        const auto c = interval_values(spec, I);
        for (std::size_t a = 0; a < A; ++a) table[i * A + a] = std::abs(coeff_sum(c, alphas[a], I.x));
    });
    FixedAlphaReport rep;
    rep.alphas = alphas;
    rep.values.assign(A, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t a = 0; a < A; ++a) rep.values[a] += table[i * A + a];
    const double norm = static_cast<double>(N) * static_cast<double>(family.H);
    for (auto& v : rep.values) v /= norm;
    rep.argmax = static_cast<std::size_t>(
        std::max_element(rep.values.begin(), rep.values.end()) - rep.values.begin());
    rep.max = rep.values[rep.argmax];
    return rep;
}

FixedAlphaReport fixed_alpha_statistic(const FunctionSpec& spec, std::int64_t X, std::int64_t H,
                                       const std::vector<double>& alphas) {
    return fixed_alpha_statistic(spec, build_family(X, H, FamilyMode::dense, 0, 0), alphas);
}

std::vector<double> rational_candidates(std::uint32_t Q) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> fr;
    for (std::uint32_t q = 1; q <= Q; ++q)
        for (std::uint32_t a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1) fr.emplace_back(a, q);
    std::sort(fr.begin(), fr.end(), [](auto l, auto r) {
        return std::uint64_t{l.first} * r.second < std::uint64_t{r.first} * l.second;
    });
    std::vector<double> out;
    for (auto [a, q] : fr) out.push_back(static_cast<double>(a) / static_cast<double>(q));
    return out;
}

UniformityReport archimedean_demo(double t, const IntervalFamily& family) {
    const double X = static_cast<double>(family.X);
    const double H = static_cast<double>(family.H);
    if (std::abs(t) > 0.1 * X * X / (H * H))
        throw ParameterError("archimedean_demo requires |t| <= 0.1 X^2/H^2");
    const auto spec = FunctionSpec::archimedean(t);
    UniformityReport rep;
    rep.X = family.X;
    rep.H = family.H;
    rep.seed = family.seed;
    rep.records.resize(family.intervals.size());
    parallel_for(family.intervals.size(), [&](std::size_t i) {
        const auto& I = family.intervals[i];
        const double alpha = t / (2.0 * std::numbers::pi * static_cast<double>(I.x));
        const auto c = interval_values(spec, I);
        rep.records[i] = {I.x, alpha - std::floor(alpha), std::abs(coeff_sum(c, alpha, I.x)) / H};
    });
    summarise(rep);
    return rep;
}

UniformityReport archimedean_demo(double t, std::int64_t X, std::int64_t H) {
    return archimedean_demo(t, build_family(X, H, FamilyMode::dense, 0, 0));
}

SlotScan slot_scan(std::span<const cplx> a, std::int64_t X, std::int64_t H, std::int64_t y,
                   double eta, double tau) {
    check_xh(X, H);
    if (y < 0 || y >= H) throw ParameterError("slot_scan offset y must lie in [0, H)");
    const std::int64_t l0 = ceil_div(X, 500 * H);
    const std::int64_t l1 = floor_div(X, 250 * H);
    const std::int64_t last_end = (500 * l1 + 500) * H + y;
    if (static_cast<std::int64_t>(a.size()) < last_end)
        throw CoverageError("slot_scan data must cover [1, " + std::to_string(last_end) + "]");
    SlotScan scan;
    scan.counts.assign(500, 0);
    scan.guarantee = eta * static_cast<double>(X) / (1000.0 * static_cast<double>(H));
    const double threshold = eta * static_cast<double>(H) / 2.0;
    parallel_for(500, [&](std::size_t v) {
        std::size_t count = 0;
        for (std::int64_t l = l0; l <= l1; ++l) {
            const std::int64_t start = (500 * l + static_cast<std::int64_t>(v)) * H + y;
            const std::span<const cplx> c(a.data() + start, static_cast<std::size_t>(H));
            if (sup_alpha_coeffs(c, tau).value >= threshold) ++count;
        }
        scan.counts[v] = count;
    });
    for (std::size_t v = 0; v < 500; ++v)
        if (scan.counts[v] > scan.best_count) {
            scan.best_count = scan.counts[v];
            scan.best_v = v;
        }
    return scan;
}

}  // namespace unilab

#include "unilab/error.hpp"
#include "unilab/parallel.hpp"
#include "unilab/proofgraph.hpp"
#include "unilab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace unilab {

double dist_to_multiple(double v, double m) {
    const double r = v - m * std::round(v / m);
    return std::abs(r);
}

namespace {

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    lo = std::max<std::uint64_t>(lo, 2);
    if (hi < lo) return {};
    return primes_in(lo, hi).primes;
}

// Indices of `ivs` sorted by left endpoint, and the sorted endpoints.
struct StartIndex {
    std::vector<std::size_t> order;
    std::vector<double> starts;

    explicit StartIndex(const std::vector<Interval>& ivs) : order(ivs.size()) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return ivs[a].x < ivs[b].x; });
        for (auto k : order) starts.push_back(static_cast<double>(ivs[k].x));
    }

    // Positions (into order) of intervals whose start lies in [lo, hi].
    std::pair<std::size_t, std::size_t> range(double lo, double hi) const {
        const auto a = std::lower_bound(starts.begin(), starts.end(), lo) - starts.begin();
        const auto b = std::upper_bound(starts.begin(), starts.end(), hi) - starts.begin();
        return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
    }
};

// Set distance between [x, x+H] and r * [y, y+H].
double dilate_gap(std::int64_t x, std::int64_t y, std::int64_t H, double r) {
    const double lo = r * static_cast<double>(y);
    const double hi = r * static_cast<double>(y + H);
    const double a = static_cast<double>(x);
    const double b = static_cast<double>(x + H);
    return std::max({0.0, lo - b, a - hi});
}

}  // namespace

PrimeRatioGraph build_graph(const FrequencyAssignment& freqs, const GraphOptions& opt_in) {
    const auto& ivs = freqs.family.intervals;
    const std::size_t N = ivs.size();
    if (freqs.alpha.size() != N) throw ParameterError("frequency assignment size mismatch");
    if (opt_in.P1 < 2) throw ParameterError("graph requires P' >= 2");
    const std::int64_t H = freqs.family.H;
    const double Hd = static_cast<double>(H);

    GraphOptions opt = opt_in;
    const double P1 = static_cast<double>(opt.P1);
    const double P2 = static_cast<double>(opt.P2);
    if (opt.geom_tol < 0.0) opt.geom_tol = opt.P2 ? 100.0 * Hd / (P1 * P2) : 100.0 * Hd / P1;
    if (opt.freq_tol < 0.0) opt.freq_tol = 10.0 * P1 * P1 * std::max(P2, 1.0) / Hd;

    PrimeRatioGraph g;
    g.vertices = N;
    g.options = opt;
    if (N < 2) return g;

    const auto primes = primes_between(opt.P1, 2 * opt.P1);
    const auto second = opt.P2 ? primes_between((opt.P2 + 1) / 2, opt.P2) : std::vector<std::uint64_t>{};
    const StartIndex index(ivs);

    struct Hit {
        std::size_t i, j;
        std::uint64_t p1, p2;
        double gap;
    };
    std::vector<std::vector<Hit>> hits(N);
    parallel_for(N, [&](std::size_t j) {
        for (auto p1 : primes)
            for (auto p2 : primes) {
                if (p1 == p2) continue;
                const double r = static_cast<double>(p2) / static_cast<double>(p1);
                const double lo = r * static_cast<double>(ivs[j].x);
                const double hi = r * static_cast<double>(ivs[j].x + H);
                const auto [a, b] = index.range(lo - Hd - opt.geom_tol, hi + opt.geom_tol);
                for (std::size_t pos = a; pos < b; ++pos) {
                    const std::size_t i = index.order[pos];
                    if (i == j) continue;
                    const double gap = dilate_gap(ivs[i].x, ivs[j].x, H, r);
                    if (gap <= opt.geom_tol) hits[j].push_back({i, j, p1, p2, gap});
                }
            }
    });

    std::map<std::pair<std::size_t, std::size_t>, GraphEdge> merged;
    for (const auto& list : hits)
        for (const auto& h : list) {
            GraphEdge e;
            if (h.i < h.j) {
                e.i = h.i; e.j = h.j; e.p1 = h.p1; e.p2 = h.p2;
            } else {
                e.i = h.j; e.j = h.i; e.p1 = h.p2; e.p2 = h.p1;
            }
            e.gap = h.gap;
            auto [it, inserted] = merged.try_emplace({e.i, e.j}, e);
            if (inserted) continue;
            auto& old = it->second;
            if (old.p1 != e.p1 || old.p2 != e.p2) {
                std::ostringstream msg;
                msg << "intervals " << e.i << " and " << e.j << " carry two prime ratios "
                    << old.p2 << "/" << old.p1 << " and " << e.p2 << "/" << e.p1;
                throw InconsistencyError(msg.str());
            }
            old.gap = std::min(old.gap, e.gap);
        }

    g.geometric_candidates = merged.size();
    for (auto& [key, e] : merged) {
        const double r = static_cast<double>(e.p2) * freqs.alpha[e.i] -
                         static_cast<double>(e.p1) * freqs.alpha[e.j];
        e.residual = dist_to_multiple(r, 1.0);
        if (e.residual > opt.freq_tol) continue;
        for (auto pp : second)
            if (dist_to_multiple(r, static_cast<double>(pp)) <= opt.freq_tol) e.second_primes.push_back(pp);
        g.edges.push_back(std::move(e));
    }
    return g;
}

std::string graph_csv(const PrimeRatioGraph& g) {
    std::ostringstream out;
    out << "i,j,p1,p2,gap,residual_mod1,n_primes_ok\n";
    char buf[256];
    for (const auto& e : g.edges) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%llu,%llu,%.17g,%.17g,%zu\n", e.i, e.j,
                      static_cast<unsigned long long>(e.p1), static_cast<unsigned long long>(e.p2),
                      e.gap, e.residual, e.second_primes.size());
        out << buf;
    }
    return out.str();
}

double min_ratio_separation(const PrimeRatioGraph& g) {
    std::vector<std::vector<double>> ratios(g.vertices);
    for (const auto& e : g.edges) {
        const double r = static_cast<double>(e.p2) / static_cast<double>(e.p1);
        ratios[e.i].push_back(r);
        ratios[e.j].push_back(1.0 / r);
    }
    double best = std::numeric_limits<double>::infinity();
    for (auto& list : ratios) {
        std::sort(list.begin(), list.end());
        for (std::size_t k = 1; k < list.size(); ++k) {
            const double d = list[k] - list[k - 1];
            if (d > 1e-15) best = std::min(best, d);
        }
    }
    return best;
}

MixingReport mixing_count(const std::vector<Interval>& A1, const std::vector<Interval>& A2,
                          std::uint64_t P, double geom_tol, std::int64_t X) {
    if (P < 2) throw ParameterError("mixing_count requires P' >= 2");
    if (!(geom_tol >= 0.0)) throw ParameterError("mixing_count requires geom_tol >= 0");
    MixingReport rep;
    const double Pd = static_cast<double>(P);
    const double d = (Pd / std::log(Pd)) * (Pd / std::log(Pd));
    const double n1 = static_cast<double>(A1.size());
    const double n2 = static_cast<double>(A2.size());
    if (A1.empty() || A2.empty()) return rep;

    const std::int64_t H = A1.front().H;
    for (const auto& I : A1) if (I.H != H) throw ParameterError("mixing_count needs intervals of one length");
    for (const auto& I : A2) if (I.H != H) throw ParameterError("mixing_count needs intervals of one length");
    const double Hd = static_cast<double>(H);

    const auto primes = primes_between(P, 2 * P);
    const StartIndex index(A1);
    std::vector<std::uint64_t> counts(A2.size(), 0);
    parallel_for(A2.size(), [&](std::size_t j) {
        std::uint64_t c = 0;
        for (auto p1 : primes)
            for (auto p2 : primes) {
                const double r = static_cast<double>(p2) / static_cast<double>(p1);
                const double lo = r * static_cast<double>(A2[j].x);
                const double hi = r * static_cast<double>(A2[j].x + H);
                const auto [a, b] = index.range(lo - Hd - geom_tol, hi + geom_tol);
                for (std::size_t pos = a; pos < b; ++pos)
                    if (dilate_gap(A1[index.order[pos]].x, A2[j].x, H, r) <= geom_tol) ++c;
            }
        counts[j] = c;
    });
    for (auto c : counts) rep.count += c;
    rep.first_term = n1 * n2 * (Hd / static_cast<double>(X)) * d;
    rep.second_term = std::sqrt(n1 * n2) * d;
    rep.fitted_c = static_cast<double>(rep.count) / (rep.first_term + rep.second_term);
    return rep;
}

}  // namespace unilab

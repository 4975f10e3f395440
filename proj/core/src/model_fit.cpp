#include "unilab/error.hpp"
#include "unilab/parallel.hpp"
#include "unilab/proofgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace unilab {

namespace {

double wrap(double v) { return v - std::round(v); }  // into [-1/2, 1/2]

struct Candidate {
    std::size_t score = 0;
    double ssr = 0.0;
    std::uint32_t q = 1;
    double T = 0.0;
};

// Better = higher score, then lower SSR over inliers, then smaller q, then smaller T.
bool better(const Candidate& a, const Candidate& b) {
    return std::make_tuple(-static_cast<long long>(a.score), a.ssr, a.q, a.T) <
           std::make_tuple(-static_cast<long long>(b.score), b.ssr, b.q, b.T);
}

struct Data {
    std::vector<double> alpha;   // reduced mod 1
    std::vector<double> w;       // 1 / (2 pi c_I)
    double thresh = 0.0;
};

Candidate evaluate(const Data& d, std::uint32_t q, double T) {
    Candidate c;
    c.q = q;
    c.T = T;
    const double qd = static_cast<double>(q);
    for (std::size_t i = 0; i < d.alpha.size(); ++i) {
        const double u = d.alpha[i] - T * d.w[i];
        const double r = std::abs(wrap(u * qd)) / qd;
        if (r <= d.thresh) {
            ++c.score;
            c.ssr += r * r;
        }
    }
    return c;
}

}  // namespace

ModelFit fit_frequency_model(const FrequencyAssignment& freqs, const FitOptions& opt) {
    const auto& ivs = freqs.family.intervals;
    if (freqs.alpha.size() != ivs.size() || freqs.strength.size() != ivs.size())
        throw ParameterError("frequency assignment size mismatch");
    if (opt.q_max < 1) throw ParameterError("fit_frequency_model requires q_max >= 1");
    const double H = static_cast<double>(freqs.family.H);
    const double X = static_cast<double>(freqs.family.X);

    ModelFit fit;
    fit.anchor_offset = opt.anchor_offset;
    Data d;
    d.thresh = 1.0 / (4.0 * H);
    double c_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (freqs.strength[i] < opt.eta) continue;
        const double c = static_cast<double>(ivs[i].x) + opt.anchor_offset * H;
        fit.used.push_back(i);
        d.alpha.push_back(freqs.alpha[i] - std::floor(freqs.alpha[i]));
        d.w.push_back(1.0 / (2.0 * std::numbers::pi * c));
        c_min = std::min(c_min, c);
    }
    if (fit.used.size() < 8)
        throw EmptyFitError("fit_frequency_model needs at least 8 intervals with strength >= eta, got " +
                            std::to_string(fit.used.size()));

    fit.T_max = opt.T_max >= 0.0 ? opt.T_max : X * X / std::pow(H, 2.0 - opt.rho);
    fit.cluster_radius = opt.cluster_radius >= 0.0 ? opt.cluster_radius : X / std::pow(H, 1.0 - opt.rho);
    // T / (2 pi c) moves by at most 1/(8H) between neighbouring grid points.
    fit.grid_spacing = std::numbers::pi * c_min / (4.0 * H);
    const auto K = static_cast<std::int64_t>(std::floor(fit.T_max / fit.grid_spacing));
    const std::size_t n_T = static_cast<std::size_t>(2 * K + 1);

    constexpr std::size_t kBlock = 1024;
    const std::size_t blocks = (n_T + kBlock - 1) / kBlock;
    std::vector<Candidate> block_best(blocks * opt.q_max);
    parallel_for(blocks * opt.q_max, [&](std::size_t job) {
        const auto q = static_cast<std::uint32_t>(job / blocks + 1);
        const std::size_t b = job % blocks;
        Candidate best;
        bool have = false;
        for (std::size_t k = b * kBlock; k < std::min(n_T, (b + 1) * kBlock); ++k) {
            const double T = static_cast<double>(static_cast<std::int64_t>(k) - K) * fit.grid_spacing;
            const auto c = evaluate(d, q, T);
            if (!have || better(c, best)) { best = c; have = true; }
        }
        block_best[job] = best;
    });
    Candidate best = block_best[0];
    for (const auto& c : block_best)
        if (better(c, best)) best = c;

    // Least-squares polish of T over the inliers, kept only if the score holds.
    for (int round = 0; round < 3; ++round) {
        const double qd = static_cast<double>(best.q);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < d.alpha.size(); ++i) {
            const double u = d.alpha[i] - best.T * d.w[i];
            const double s = wrap(u * qd) / qd;  // signed residual
            if (std::abs(s) > d.thresh) continue;
            // alpha - a/q = T w + s, so target for T w is (T w + s)
            num += (best.T * d.w[i] + s) * d.w[i];
            den += d.w[i] * d.w[i];
        }
        if (den == 0.0) break;
        const double T_ls = std::clamp(num / den, -fit.T_max, fit.T_max);
        const auto c = evaluate(d, best.q, T_ls);
        if (c.score < best.score) break;
        if (c.score == best.score && c.ssr >= best.ssr) break;
        best = c;
    }

    fit.T = best.T;
    fit.two_pi_T = 2.0 * std::numbers::pi * best.T;
    fit.q = best.q;
    fit.score = best.score;
    fit.ssr = best.ssr;
    fit.inlier_fraction = static_cast<double>(best.score) / static_cast<double>(d.alpha.size());
    const double qd = static_cast<double>(best.q);
    std::vector<double> local_T;
    for (std::size_t i = 0; i < d.alpha.size(); ++i) {
        const double u = d.alpha[i] - best.T * d.w[i];
        auto a = static_cast<std::int64_t>(std::llround(u * qd));
        const double res = std::abs(u - static_cast<double>(a) / qd);
        a %= static_cast<std::int64_t>(best.q);
        if (a < 0) a += best.q;
        fit.residues.push_back(a);
        fit.residuals.push_back(res);
        // Local estimate: unwrap alpha - a/q to the branch nearest T w.
        const double base = d.alpha[i] - static_cast<double>(a) / qd;
        const double lifted = base + std::round(best.T * d.w[i] - base);
        local_T.push_back(lifted / d.w[i]);
    }

    std::sort(local_T.begin(), local_T.end());
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < local_T.size(); ++hi) {
        while (local_T[hi] - local_T[lo] > 2.0 * fit.cluster_radius) ++lo;
        if (hi - lo + 1 > fit.cluster_size) {
            fit.cluster_size = hi - lo + 1;
            fit.cluster_center = 0.5 * (local_T[lo] + local_T[hi]);
        }
    }
    return fit;
}

}  // namespace unilab

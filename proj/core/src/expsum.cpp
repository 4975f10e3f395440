#include "unilab/expsum.hpp"

#include "unilab/error.hpp"
#include "unilab/fft.hpp"
#include "unilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace unilab {

namespace {

constexpr std::size_t kAnchorStride = 4096;

void check_interval(const Interval& I) {
    if (I.x < 0) throw ParameterError("interval start must be >= 0");
    if (I.H < 1) throw ParameterError("interval length must be >= 1");
}

}  // namespace

std::vector<cplx> interval_values(const FunctionSpec& spec, const Interval& I) {
    check_interval(I);
    return evaluate(spec, static_cast<std::uint64_t>(I.begin()),
                    static_cast<std::uint64_t>(I.end()));
}

cplx coeff_sum(std::span<const cplx> c, double alpha, std::int64_t offset) {
    const cplx step = unit_phase(-frac_product(alpha, 1));
    cplx acc{0.0, 0.0};
    cplx z;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (j % kAnchorStride == 0)
            z = unit_phase(-frac_product(alpha, offset + 1 + static_cast<std::int64_t>(j)));
        acc += c[j] * z;
        z *= step;
    }
    return acc;
}

cplx coeff_sum(std::span<const cplx> c, double alpha) { return coeff_sum(c, alpha, 0); }

cplx short_sum(const FunctionSpec& spec, const Interval& I, double alpha) {
    const auto c = interval_values(spec, I);
    return coeff_sum(c, alpha, I.x);
}

SupCertificate sup_alpha_coeffs(std::span<const cplx> c, double tau, const SupOptions& opt) {
    if (!(tau > 0.0 && tau <= 0.1)) throw ParameterError("sup_alpha requires 0 < tau <= 0.1");
    if (c.empty()) throw ParameterError("sup_alpha needs at least one coefficient");
    const std::size_t H = c.size();
    const double Hd = static_cast<double>(H);

    // |S| is unchanged by the constant factor e(alpha (H+1)/2), so the
    // derivative bound can use the centred positions m - (H+1)/2. This never
    // exceeds pi*H*(H+1).
    double K = 0.0;
    for (std::size_t j = 0; j < H; ++j)
        K += std::abs(static_cast<double>(j + 1) - (Hd + 1.0) / 2.0) * std::abs(c[j]);
    K *= 2.0 * std::numbers::pi;

    struct Cell {
        std::uint64_t j;
        double a, b;
    };

    std::size_t L = 8 * fft::next_pow2(H);
    std::vector<cplx> buf(L, 0.0);
    for (std::size_t j = 0; j < H; ++j) buf[(j + 1) % L] = c[j];
    fft::forward(buf);

    std::vector<double> vals(L);
    for (std::size_t k = 0; k < L; ++k) vals[k] = std::abs(buf[k]);

    SupCertificate cert;
    cert.tau = tau;
    cert.lipschitz = K;
    cert.evaluations = L;

    double lb = -1.0;
    double best_alpha = 0.0;
    for (std::size_t k = 0; k < L; ++k)
        if (vals[k] > lb) {
            lb = vals[k];
            best_alpha = static_cast<double>(k) / static_cast<double>(L);
        }

    std::vector<Cell> live(L);
    for (std::size_t k = 0; k < L; ++k) live[k] = {k, vals[k], vals[(k + 1) % L]};

    const double slack = tau * Hd;
    double pruned_ub = 0.0;
    std::size_t level = 0;

    while (true) {
        const double half_width = 0.5 / static_cast<double>(L);
        std::vector<Cell> keep;
        for (const auto& cell : live) {
            const double ub = 0.5 * (cell.a + cell.b) + K * half_width;
            if (ub <= lb + slack) pruned_ub = std::max(pruned_ub, ub);
            else keep.push_back(cell);
        }
        live.swap(keep);
        if (live.empty()) break;

        double live_ub = 0.0;
        for (const auto& cell : live)
            live_ub = std::max(live_ub, 0.5 * (cell.a + cell.b) + K * half_width);

        if (level >= opt.max_levels || L >= (std::uint64_t{1} << 52) ||
            cert.evaluations >= opt.max_evaluations)
            throw CertificationError("sup_alpha could not certify tau within the iteration cap",
                                     best_alpha, lb, std::max(pruned_ub, live_ub));

        const std::size_t L2 = 2 * L;
        std::vector<double> mid(live.size());
        const double cost_direct = static_cast<double>(live.size()) * Hd;
        const double cost_fft = 2.0 * static_cast<double>(L2) * std::log2(static_cast<double>(L2));
        if (cost_direct > cost_fft && L2 <= opt.max_fft_len) {
            std::vector<cplx> fine(L2, 0.0);
            for (std::size_t j = 0; j < H; ++j) fine[(j + 1) % L2] = c[j];
            fft::forward(fine);
            for (std::size_t i = 0; i < live.size(); ++i) mid[i] = std::abs(fine[2 * live[i].j + 1]);
            cert.evaluations += L2;
        } else {
            parallel_for(live.size(), [&](std::size_t i) {
                const double alpha =
                    static_cast<double>(2 * live[i].j + 1) / static_cast<double>(L2);
                mid[i] = std::abs(coeff_sum(c, alpha));
            });
            cert.evaluations += live.size();
        }

        std::vector<Cell> next;
        next.reserve(2 * live.size());
        for (std::size_t i = 0; i < live.size(); ++i) {
            const auto& cell = live[i];
            if (mid[i] > lb) {
                lb = mid[i];
                best_alpha = static_cast<double>(2 * cell.j + 1) / static_cast<double>(L2);
            }
            next.push_back({2 * cell.j, cell.a, mid[i]});
            next.push_back({2 * cell.j + 1, mid[i], cell.b});
        }
        live.swap(next);
        L = L2;
        ++level;
    }

    // Polish the best point inside its neighbouring cells. Only raises value.
    {
        auto f = [&](double a) { return std::abs(coeff_sum(c, a)); };
        const double w = 1.0 / static_cast<double>(L);
        double lo = best_alpha - w, hi = best_alpha + w;
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
        double f1 = f(m1), f2 = f(m2);
        for (int it = 0; it < 48; ++it) {
            if (f1 < f2) {
                lo = m1; m1 = m2; f1 = f2;
                m2 = lo + phi * (hi - lo); f2 = f(m2);
            } else {
                hi = m2; m2 = m1; f2 = f1;
                m1 = hi - phi * (hi - lo); f1 = f(m1);
            }
        }
        cert.evaluations += 50;
        const double cand = f1 > f2 ? m1 : m2;
        if (std::max(f1, f2) > f(best_alpha)) best_alpha = cand - std::floor(cand);
    }

    cert.alpha_star = best_alpha;
    cert.value = std::abs(coeff_sum(c, best_alpha));
    cert.upper_bound = std::max({pruned_ub, lb, cert.value});
    cert.grid_len = L;
    cert.refine_steps = level;
    return cert;
}

SupCertificate sup_alpha(const FunctionSpec& spec, const Interval& I, double tau,
                         const SupOptions& opt) {
    const auto c = interval_values(spec, I);
    return sup_alpha_coeffs(c, tau, opt);
}

std::vector<std::pair<std::size_t, std::size_t>> dyadic_pieces(std::size_t len) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (unsigned j = 0; j <= 5; ++j) {
        const std::size_t n = std::size_t{1} << j;
        if (j > 0 && len / n < 8) break;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t lo = k * len / n;
            const std::size_t hi = (k + 1) * len / n;
            out.emplace_back(lo, hi - lo);
        }
    }
    return out;
}

std::vector<ExtractedFrequency> extract_frequencies(std::span<const cplx> c, std::int64_t H,
                                                    double eta, std::size_t R) {
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("extract_frequencies requires 0 < eta < 1");
    if (R > 10'000) throw ParameterError("extract_frequencies requires R <= 1e4");
    if (H < 1 || c.empty()) throw ParameterError("extract_frequencies needs a nonempty interval");
    const auto pieces = dyadic_pieces(c.size());
    const std::size_t G = 16 * fft::next_pow2(c.size());

    // One running maximum per worker; max is exact so the merge order does
    // not matter.
    const std::size_t workers = std::min<std::size_t>(thread_count(), pieces.size());
    std::vector<std::vector<double>> partial(workers, std::vector<double>(G, 0.0));
    parallel_for(workers, [&](std::size_t w) {
        std::vector<cplx> buf(G);
        for (std::size_t p = w; p < pieces.size(); p += workers) {
            std::fill(buf.begin(), buf.end(), cplx{0.0, 0.0});
            const auto [off, len] = pieces[p];
            for (std::size_t i = 0; i < len; ++i) buf[i + 1] = c[off + i];
            fft::forward(buf);
            auto& q = partial[w];
            for (std::size_t k = 0; k < G; ++k) q[k] = std::max(q[k], std::abs(buf[k]));
        }
    });
    std::vector<double> Q = std::move(partial[0]);
    for (std::size_t w = 1; w < workers; ++w)
        for (std::size_t k = 0; k < G; ++k) Q[k] = std::max(Q[k], partial[w][k]);

    std::vector<std::uint32_t> order(G);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return Q[a] > Q[b]; });

    const double sep = 1.0 / static_cast<double>(H);
    const double floor_value = eta * static_cast<double>(H);
    std::set<double> taken;
    std::vector<ExtractedFrequency> out;
    for (std::uint32_t k : order) {
        if (out.size() >= R || Q[k] < floor_value) break;
        const double g = static_cast<double>(k) / static_cast<double>(G);
        auto near = [&](double other) {
            double d = std::abs(g - other);
            d = std::min(d, 1.0 - d);
            return d <= sep;
        };
        bool blocked = false;
        if (!taken.empty()) {
            auto it = taken.lower_bound(g);
            if (it != taken.end() && near(*it)) blocked = true;
            if (!blocked && it != taken.begin() && near(*std::prev(it))) blocked = true;
            if (!blocked && near(*taken.begin())) blocked = true;
            if (!blocked && near(*taken.rbegin())) blocked = true;
        }
        if (blocked) continue;
        taken.insert(g);
        out.push_back({g, Q[k]});
    }
    return out;
}

std::vector<ExtractedFrequency> extract_frequencies(const FunctionSpec& spec, const Interval& J,
                                                    double eta, std::size_t R) {
    if (J.H < 10 || J.H % 10 != 0) throw ParameterError("extract_frequencies needs |J| = 10H");
    const auto c = interval_values(spec, J);
    return extract_frequencies(c, J.H / 10, eta, R);
}

CompletionResult completion_search(const FunctionSpec& spec, const Interval& I,
                                   const Interval& J, double alpha, double eta) {
    if (!(eta > 0.0 && eta < 0.5)) throw ParameterError("completion_search requires 0 < eta < 0.5");
    if (I.x < J.x || I.x + I.H > J.x + J.H) throw ParameterError("I must lie inside J");
    const auto cJ = interval_values(spec, J);
    const std::span<const cplx> cI(cJ.data() + (I.x - J.x), static_cast<std::size_t>(I.H));
    const double H = static_cast<double>(J.H);

    CompletionResult res;
    res.sub_value = std::abs(coeff_sum(cI, alpha, I.x));
    if (!(res.sub_value > eta * H))
        throw ParameterError("completion_search precondition |S_I(alpha)| > eta*H fails");

    const double radius = 1.0 / (eta * eta * H);
    const double step = 1.0 / (8.0 * H);
    const auto n = static_cast<std::int64_t>(std::ceil(radius / step));
    std::vector<double> grid(static_cast<std::size_t>(2 * n + 1));
    parallel_for(grid.size(), [&](std::size_t i) {
        const double th = std::clamp(static_cast<double>(static_cast<std::int64_t>(i) - n) * step,
                                     -radius, radius);
        grid[i] = std::abs(coeff_sum(cJ, alpha + th, J.x));
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] > grid[best]) best = i;
    double theta = std::clamp(static_cast<double>(static_cast<std::int64_t>(best) - n) * step,
                              -radius, radius);
    double value = grid[best];

    auto f = [&](double th) { return std::abs(coeff_sum(cJ, alpha + th, J.x)); };
    double lo = std::max(-radius, theta - step), hi = std::min(radius, theta + step);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = f(m1), f2 = f(m2);
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            lo = m1; m1 = m2; f1 = f2;
            m2 = lo + phi * (hi - lo); f2 = f(m2);
        } else {
            hi = m2; m2 = m1; f2 = f1;
            m1 = hi - phi * (hi - lo); f1 = f(m1);
        }
    }
    if (f1 > value) { value = f1; theta = m1; }
    if (f2 > value) { value = f2; theta = m2; }

    res.theta = theta;
    res.value = value;
    res.bound = std::pow(eta, 4) * H;
    res.bound_met = value >= res.bound;
    return res;
}

double large_sieve_integral(std::span<const double> points, double T) {
    if (!(T > 0.0)) throw ParameterError("large_sieve_integral requires T > 0");
    std::vector<double> logs(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i] > 0.0)) throw ParameterError("large sieve points must be positive");
        logs[i] = std::log(points[i]);
    }
    std::vector<double> rows(points.size());
    parallel_for(points.size(), [&](std::size_t m) {
        double s = 0.0;
        for (std::size_t n = 0; n < points.size(); ++n) {
            const double d = logs[m] - logs[n];
            s += d == 0.0 ? 2.0 * T : 2.0 * std::sin(T * d) / d;
        }
        rows[m] = s;
    });
    return std::accumulate(rows.begin(), rows.end(), 0.0);
}

}  // namespace unilab

#include "unilab/pretend.hpp"

#include "unilab/characters.hpp"
#include "unilab/error.hpp"
#include "unilab/parallel.hpp"
#include "unilab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

namespace unilab {

namespace {

struct PrimeData {
    std::vector<double> logp;
    std::vector<double> inv;
    std::vector<cplx> f;
    double lipschitz = 0.0;
    double max_d2 = 0.0;
};

PrimeData prime_data(const FunctionSpec& spec, std::uint64_t X) {
    PrimeData d;
    if (X < 2) return d;
    const auto primes = primes_in(2, X).primes;
    d.logp.resize(primes.size());
    d.inv.resize(primes.size());
    d.f.resize(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        d.logp[i] = std::log(static_cast<double>(primes[i]));
        d.inv[i] = 1.0 / static_cast<double>(primes[i]);
        d.f[i] = spec.at_prime(primes[i]);
        d.lipschitz += d.logp[i] * d.inv[i];
        d.max_d2 += 2.0 * d.inv[i];
    }
    return d;
}

// Objective for one character: u_p = f(p) chi(p), F(t) = sum clamp(1 - Re u_p p^{it}, 0, 2)/p.
class Objective {
public:
    Objective(const PrimeData& d, std::vector<cplx> u) : d_(d), u_(std::move(u)) {}

    double operator()(double t) const {
        double s = 0.0;
        for (std::size_t i = 0; i < u_.size(); ++i) {
            const double re = (u_[i] * std::polar(1.0, t * d_.logp[i])).real();
            s += std::clamp(1.0 - re, 0.0, 2.0) * d_.inv[i];
        }
        return s;
    }

    // F at t0 + k*h for k in [0, n), by per-prime rotation re-anchored every 512 steps.
    std::vector<double> grid(double t0, double h, std::size_t n) const {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < u_.size(); ++i) {
            const cplx step = std::polar(1.0, h * d_.logp[i]);
            cplx z;
            for (std::size_t k = 0; k < n; ++k) {
                if (k % 512 == 0)
                    z = u_[i] * std::polar(1.0, (t0 + static_cast<double>(k) * h) * d_.logp[i]);
                out[k] += std::clamp(1.0 - z.real(), 0.0, 2.0) * d_.inv[i];
                z *= step;
            }
        }
        return out;
    }

private:
    const PrimeData& d_;
    std::vector<cplx> u_;
};

struct CharResult {
    double value = 0.0;
    double t = 0.0;
    std::size_t evaluations = 0;
};

bool better(double v, double t, double best_v, double best_t) {
    return v < best_v || (v == best_v && t < best_t);
}

// Exact minimum over evaluated points of one cell, with branch-and-bound
// down to tol and a golden-section polish at the end. Depends only on the
// cell, never on other cells, so the overall minimum is order independent.
CharResult refine_cell(const Objective& F, double L, double tol, double a, double b, double fa,
                       double fb) {
    CharResult r;
    r.value = fa;
    r.t = a;
    if (better(fb, b, r.value, r.t)) { r.value = fb; r.t = b; }

    struct Sub { double a, b, fa, fb; int depth; };
    std::vector<Sub> stack{{a, b, fa, fb, 0}};
    double finest = b - a;
    while (!stack.empty()) {
        const Sub s = stack.back();
        stack.pop_back();
        const double lb = 0.5 * (s.fa + s.fb) - 0.5 * L * (s.b - s.a);
        if (lb >= r.value - tol || s.depth > 60) continue;
        const double m = 0.5 * (s.a + s.b);
        const double fm = F(m);
        ++r.evaluations;
        if (better(fm, m, r.value, r.t)) { r.value = fm; r.t = m; }
        finest = std::min(finest, 0.5 * (s.b - s.a));
        stack.push_back({m, s.b, fm, s.fb, s.depth + 1});
        stack.push_back({s.a, m, s.fa, fm, s.depth + 1});
    }

    double lo = std::max(a, r.t - finest), hi = std::min(b, r.t + finest);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = F(m1), f2 = F(m2);
    r.evaluations += 2;
    for (int it = 0; it < 50 && hi - lo > 1e-12 * std::max(1.0, std::abs(r.t)); ++it) {
        if (f1 < f2) {
            hi = m2; m2 = m1; f2 = f1;
            m1 = hi - phi * (hi - lo); f1 = F(m1);
        } else {
            lo = m1; m1 = m2; f1 = f2;
            m2 = lo + phi * (hi - lo); f2 = F(m2);
        }
        ++r.evaluations;
        if (better(f1, m1, r.value, r.t)) { r.value = f1; r.t = m1; }
        if (better(f2, m2, r.value, r.t)) { r.value = f2; r.t = m2; }
    }
    return r;
}

CharResult search_character(const Objective& F, double L, double t_max, double h, double tol) {
    // Grid anchored at 0 with spacing h, plus the endpoints +-t_max.
    const auto K = static_cast<std::int64_t>(std::floor(t_max / h));
    std::vector<double> ts;
    std::vector<double> vals;
    {
        const auto n = static_cast<std::size_t>(2 * K + 1);
        vals = F.grid(-static_cast<double>(K) * h, h, n);
        ts.resize(n);
        for (std::size_t k = 0; k < n; ++k) ts[k] = static_cast<double>(static_cast<std::int64_t>(k) - K) * h;
        if (ts.front() > -t_max) {
            ts.insert(ts.begin(), -t_max);
            vals.insert(vals.begin(), F(-t_max));
        }
        if (ts.back() < t_max) {
            ts.push_back(t_max);
            vals.push_back(F(t_max));
        }
    }

    CharResult best;
    best.value = vals[0];
    best.t = ts[0];
    best.evaluations = vals.size();
    for (std::size_t k = 1; k < vals.size(); ++k)
        if (better(vals[k], ts[k], best.value, best.t)) { best.value = vals[k]; best.t = ts[k]; }

    const std::size_t cells = ts.size() - 1;
    std::vector<double> lb(cells);
    for (std::size_t k = 0; k < cells; ++k)
        lb[k] = 0.5 * (vals[k] + vals[k + 1]) - 0.5 * L * (ts[k + 1] - ts[k]);
    std::vector<std::size_t> order(cells);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lb[a] < lb[b]; });

    for (std::size_t k : order) {
        if (lb[k] >= best.value) break;
        const auto r = refine_cell(F, L, tol, ts[k], ts[k + 1], vals[k], vals[k + 1]);
        best.evaluations += r.evaluations;
        if (better(r.value, r.t, best.value, best.t)) { best.value = r.value; best.t = r.t; }
    }
    return best;
}

}  // namespace

double pretentious_objective(const FunctionSpec& spec, std::uint64_t X, std::uint32_t q,
                             std::uint32_t index, double t) {
    const auto d = prime_data(spec, X);
    const auto chi = character(q, index);
    std::vector<cplx> u(d.f.size());
    const auto primes = X >= 2 ? primes_in(2, X).primes : std::vector<std::uint64_t>{};
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = d.f[i] * chi(static_cast<std::int64_t>(primes[i]));
    return Objective(d, std::move(u))(t);
}

DistanceResult pretentious_distance(const FunctionSpec& spec, std::uint64_t X, std::uint32_t Q,
                                    double t_max, double tol) {
    if (Q < 1 || Q > 100) throw ParameterError("pretentious_distance requires 1 <= Q <= 100");
    if (X < 2 || X > 100'000'000) throw ParameterError("pretentious_distance requires 2 <= X <= 1e8");
    if (!(t_max >= 0.0)) throw ParameterError("t_max must be nonnegative");
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");

    const auto d = prime_data(spec, X);
    const auto primes = primes_in(2, X).primes;

    struct Job { std::uint32_t q, index; };
    std::vector<Job> jobs;
    for (std::uint32_t q = 1; q <= Q; ++q)
        for (std::uint32_t i = 0; i < euler_phi(q); ++i) jobs.push_back({q, i});

    const double L = d.lipschitz;
    const double h = 0.2 / L;
    std::vector<CharResult> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto chi = character(jobs[j].q, jobs[j].index);
        std::vector<cplx> u(d.f.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = d.f[i] * chi(static_cast<std::int64_t>(primes[i]));
        const Objective F(d, std::move(u));
        results[j] = search_character(F, L, t_max, h, tol);
    });

    DistanceResult res;
    res.X = X;
    res.Q = Q;
    res.t_max = t_max;
    res.tol = tol;
    res.grid_spacing = h;
    res.lipschitz = L;
    res.max_d2 = d.max_d2;
    std::size_t best = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        res.evaluations += results[j].evaluations;
        const auto key = [&](std::size_t k) {
            return std::make_tuple(results[k].value, jobs[k].q, jobs[k].index, results[k].t);
        };
        if (key(j) < key(best)) best = j;
    }
    res.D2 = std::max(0.0, results[best].value);
    res.D = std::sqrt(res.D2);
    res.argmin_t = results[best].t;
    res.argmin_q = jobs[best].q;
    res.argmin_index = jobs[best].index;
    return res;
}

std::string distance_csv_header() { return "spec,X,Q,t_max,tol,D,argmin_t,argmin_q,argmin_index"; }

std::string distance_csv_row(const FunctionSpec& spec, const DistanceResult& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "\"%s\",%llu,%u,%.17g,%.17g,%.17g,%.17g,%u,%u", spec.name().c_str(),
                  static_cast<unsigned long long>(r.X), r.Q, r.t_max, r.tol, r.D, r.argmin_t,
                  r.argmin_q, r.argmin_index);
    return buf;
}

}  // namespace unilab

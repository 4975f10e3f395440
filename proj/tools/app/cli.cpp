#include "cli.hpp"

#include "report.hpp"
#include "suite.hpp"

#include "unilab/error.hpp"
#include "unilab/parallel.hpp"
#include "unilab/sieve.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <iostream>
#include <numbers>
#include <random>

namespace unilab::app {

namespace {

struct Outcome {
    json results;
    std::string ref;
    std::vector<std::pair<std::string, bool>> assertions;
    std::string csv;
};

// Options shared by every subcommand. None of them enters the payload.
struct Common {
    std::string out = "-";
    std::string csv;
    unsigned threads = 1;
};

std::int64_t as_int(double v, const char* name) {
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9e15)
        throw ParameterError(std::string("--") + name + " must be an integer, got " + std::to_string(v));
    return static_cast<std::int64_t>(v);
}

// H = floor(X^theta) when theta is given, else H itself.
std::int64_t resolve_H(double X, double H, double theta) {
    if (theta > 0.0) {
        if (theta >= 1.0) throw ParameterError("--theta must lie in (0, 1)");
        auto h = static_cast<std::int64_t>(std::floor(std::pow(X, theta) * (1.0 + 1e-12)));
        return std::max<std::int64_t>(h, 1);
    }
    if (H <= 0.0) throw ParameterError("one of --H or --theta is required");
    return as_int(H, "H");
}

json typed(const std::string& s) {
    if (s.empty()) return nullptr;
    if (s == "true") return true;
    if (s == "false") return false;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    return s;
}

const std::set<std::string> kNonPayload = {"help", "out", "csv", "threads", "dump", "edges-csv"};

// Every option of the subcommand with its resolved value.
json resolved_config(const CLI::App* sub) {
    json cfg = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (kNonPayload.count(name)) continue;
        if (opt->get_expected_max() == 0) {  // flag
            cfg[name] = opt->count() > 0;
            continue;
        }
        if (opt->count() > 0) {
            const auto& r = opt->results();
            if (opt->get_expected_max() > 1) {
                json arr = json::array();
                for (const auto& s : r) arr.push_back(typed(s));
                cfg[name] = arr;
            } else {
                cfg[name] = typed(r.back());
            }
        } else {
            cfg[name] = typed(opt->get_default_str());
        }
    }
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open " + path + " for writing");
    f << text;
}

FamilyMode parse_mode(const std::string& s) {
    if (s == "strict") return FamilyMode::strict;
    if (s == "dense") return FamilyMode::dense;
    throw ParameterError("--mode must be strict or dense");
}

// ---- commands -----------------------------------------------------------------

struct SieveCmd {
    std::string kind = "liouville";
    double a = 1, b = 100;
    std::string dump;
    std::size_t max_print = 1000;

    void add(CLI::App* s) {
        s->add_option("--kind", kind, "liouville, moebius, mangoldt or primes");
        s->add_option("--a", a, "range start (inclusive)");
        s->add_option("--b", b, "range end (exclusive; inclusive for primes)");
        s->add_option("--dump", dump, "write the binary table here");
        s->add_option("--max-print", max_print, "largest table echoed in the report");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "segmented sieve tables";
        const auto lo = static_cast<std::uint64_t>(as_int(a, "a"));
        const auto hi = static_cast<std::uint64_t>(as_int(b, "b"));
        if (kind == "primes") {
            const auto pl = primes_in(lo, hi);
            o.results = {{"count", pl.primes.size()}};
            if (pl.primes.size() <= max_print) o.results["primes"] = pl.primes;
            return o;
        }
        TableKind k;
        if (kind == "liouville") k = TableKind::liouville;
        else if (kind == "moebius") k = TableKind::moebius;
        else if (kind == "mangoldt") k = TableKind::mangoldt;
        else throw ParameterError("--kind must be liouville, moebius, mangoldt or primes");
        const auto t = sieve_range(k, lo, hi);
        double sum = 0.0;
        std::vector<double> vals;
        for (std::uint64_t n = lo; n < hi; ++n) {
            const double v = t.value(n);
            sum += v;
            if (t.size() <= max_print) vals.push_back(v);
        }
        o.results = {{"length", t.size()}, {"sum", sum}};
        if (t.size() <= max_print) o.results["values"] = vals;
        if (!dump.empty()) {
            std::ofstream f(dump, std::ios::binary);
            if (!f) throw ParameterError("cannot open " + dump);
            t.write(f);
        }
        return o;
    }
};

struct SupCmd {
    std::string spec = "liouville";
    double x = 10'000, H = 256, tau = 0.01;
    std::size_t intervals = 1;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        s->add_option("--x", x, "interval start; the first interval is (x, x+H]");
        s->add_option("--H", H, "interval length");
        s->add_option("--tau", tau, "certification tolerance as a fraction of H");
        s->add_option("--intervals", intervals, "number of consecutive intervals");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "certified sup over alpha of a short exponential sum";
        const auto f = parse_function_spec(spec);
        const auto h = as_int(H, "H");
        std::vector<SupCertificate> certs(intervals);
        std::vector<Interval> ivs(intervals);
        for (std::size_t i = 0; i < intervals; ++i) ivs[i] = {as_int(x, "x") + static_cast<std::int64_t>(i) * h, h};
        parallel_for(intervals, [&](std::size_t i) { certs[i] = sup_alpha(f, ivs[i], tau); });
        json rows = json::array();
        bool ok = true;
        for (std::size_t i = 0; i < intervals; ++i) {
            json r = to_json(certs[i]);
            r["interval"] = to_json(ivs[i]);
            rows.push_back(r);
            ok = ok && certs[i].upper_bound <= certs[i].value + tau * static_cast<double>(h) * (1 + 1e-12);
        }
        o.results = {{"certificates", rows}};
        o.assertions.emplace_back("upper bound within tau*H of value", ok);
        return o;
    }
};

struct FamilyOpts {
    double X = 1e6, H = 0, theta = 0;
    std::string mode = "dense";
    std::uint64_t seed = 1;
    std::size_t samples = 0;

    void add(CLI::App* s, bool seed_required) {
        s->add_option("--X", X, "scale");
        s->add_option("--H", H, "interval length");
        s->add_option("--theta", theta, "set H = floor(X^theta)");
        s->add_option("--mode", mode, "strict or dense family");
        auto* o = s->add_option("--seed", seed, "sampling seed");
        if (seed_required) o->required();
        s->add_option("--samples", samples, "sampled intervals (0 = whole family)");
    }
    std::int64_t Xi() const { return as_int(X, "X"); }
    std::int64_t Hi() const { return resolve_H(X, H, theta); }
    IntervalFamily build() const { return build_family(Xi(), Hi(), parse_mode(mode), seed, samples); }
};

struct UniformityCmd {
    std::string spec = "liouville";
    FamilyOpts fam;
    double tau = 0.01, eta = 0.1, epsilon = 0.0005, rho = 0.1, delta = 0.5;
    bool records = false, all = false;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        fam.add(s, true);
        s->add_option("--tau", tau, "certification tolerance");
        s->add_option("--eta", eta);
        s->add_option("--epsilon", epsilon);
        s->add_option("--rho", rho);
        s->add_option("--delta", delta);
        s->add_flag("--all", all, "enumerate the whole family");
        s->add_flag("--records", records, "include per-interval records");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "Fourier-uniformity average of sup_alpha |S_I(alpha)| / H";
        ToleranceConfig cfg{eta, epsilon, rho, fam.theta > 0 ? fam.theta : 0.5, delta, fam.seed};
        cfg.validate();
        std::size_t M = fam.samples;
        if (M == 0 && !all) M = std::min<std::size_t>(static_cast<std::size_t>(fam.Xi() / fam.Hi()), 512);
        const auto family = build_family(fam.Xi(), fam.Hi(), parse_mode(fam.mode), fam.seed, M);
        const auto rep = uniformity_statistic(parse_function_spec(spec), family, tau);
        o.results = to_json(rep, records);
        o.results["family_range"] = "[X/10, 10X]";
        o.csv = uniformity_csv_header() + "\n" + uniformity_csv_row(rep) + "\n";
        o.assertions.emplace_back("0 <= U <= 1", rep.U >= 0.0 && rep.U <= 1.0);
        return o;
    }
};

struct FixedAlphaCmd {
    std::string spec = "liouville";
    FamilyOpts fam;
    std::uint32_t Q = 0;
    std::vector<double> alphas, arch_t;
    std::size_t random = 0;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        fam.add(s, false);
        s->add_option("--Q", Q, "add rationals a/q with q <= Q");
        s->add_option("--alphas", alphas, "explicit candidates");
        s->add_option("--arch-t", arch_t, "add t / (2 pi xbar) for each t");
        s->add_option("--random", random, "add this many seeded uniform candidates");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "single-frequency average (alpha outside the integral)";
        const auto family = fam.build();
        std::vector<double> cand = alphas;
        if (Q > 0)
            for (double a : rational_candidates(Q)) cand.push_back(a);
        if (!arch_t.empty()) {
            double xbar = 0.0;
            for (const auto& I : family.intervals) xbar += static_cast<double>(I.x) + 0.5 * static_cast<double>(I.H);
            xbar /= static_cast<double>(std::max<std::size_t>(family.intervals.size(), 1));
            for (double t : arch_t) cand.push_back(t / (2.0 * std::numbers::pi * xbar));
        }
        std::mt19937_64 rng(fam.seed);
        for (std::size_t i = 0; i < random; ++i) cand.push_back(static_cast<double>(rng() >> 11) * 0x1p-53);
        const auto rep = fixed_alpha_statistic(parse_function_spec(spec), family, cand);
        o.results = to_json(rep);
        o.results["intervals"] = family.intervals.size();
        o.results["note"] = "candidates are caller supplied; no global search over alpha";
        return o;
    }
};

struct ArchCmd {
    FamilyOpts fam;
    double t = 0, t_scale = -1, min_U = -1;

    void add(CLI::App* s) {
        fam.add(s, false);
        s->add_option("--t", t, "twist n^{it}");
        s->add_option("--t-scale", t_scale, "set t = scale * X^2 / H^2");
        s->add_option("--min-U", min_U, "assert U >= this value");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "n^{it} sums at alpha = t / (2 pi x)";
        const double X = static_cast<double>(fam.Xi()), H = static_cast<double>(fam.Hi());
        const double tt = t_scale >= 0 ? t_scale * X * X / (H * H) : t;
        const auto rep = archimedean_demo(tt, fam.build());
        o.results = to_json(rep, false);
        o.results["t"] = tt;
        if (min_U >= 0) o.assertions.emplace_back("U >= min-U", rep.U >= min_U);
        return o;
    }
};

struct DistanceCmd {
    std::string spec = "liouville", tmax = "auto";
    double X = 1e4, H = 0, theta = 0.5, rho = 0.1, tol = 1e-4;
    std::uint32_t Q = 1;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        s->add_option("--X", X, "prime cutoff");
        s->add_option("--Q", Q, "largest modulus");
        s->add_option("--tmax", tmax, "number, 'auto' for X^2/H^(2-rho), or 'X'");
        s->add_option("--H", H, "interval length for --tmax auto");
        s->add_option("--theta", theta, "H = floor(X^theta) when --H is absent");
        s->add_option("--rho", rho);
        s->add_option("--tol", tol, "certified gap in D^2");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "pretentious distance D(f; X; Q)";
        const auto f = parse_function_spec(spec);
        double t_max;
        std::string range;
        if (tmax == "auto") {
            const double h = static_cast<double>(H > 0 ? as_int(H, "H") : resolve_H(X, 0, theta));
            t_max = X * X / std::pow(h, 2.0 - rho);
            range = "X^2/H^(2-rho)";
        } else if (tmax == "X") {
            t_max = X;
            range = "X";
        } else {
            t_max = std::stod(tmax);
            range = "explicit";
        }
        const auto r = pretentious_distance(f, static_cast<std::uint64_t>(as_int(X, "X")), Q, t_max, tol);
        o.results = to_json(r);
        o.results["t_range"] = range;
        o.csv = distance_csv_header() + "\n" + distance_csv_row(f, r) + "\n";
        return o;
    }
};

struct MsdCmd {
    std::string spec = "liouville";
    double x = 1e5, H = 1000, delta = 0.5, max_ratio = -1;
    std::size_t count = 1;
    std::uint64_t seed = 1;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        s->add_option("--x", x, "interval start; with --count > 1, x is drawn from [x, 2x)");
        s->add_option("--H", H, "interval length");
        s->add_option("--delta", delta, "deviation threshold for exceptional primes");
        s->add_option("--count", count, "number of seeded starts");
        s->add_option("--seed", seed, "seed for the starts");
        s->add_option("--max-ratio", max_ratio, "assert lhs/H^2 <= this value");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "mean-scales-down inequality";
        const auto f = parse_function_spec(spec);
        const auto x0 = as_int(x, "x");
        std::vector<std::int64_t> xs(count, x0);
        std::mt19937_64 rng(seed);
        if (count > 1)
            for (auto& v : xs) v = x0 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x0));
        std::vector<MsdResult> res(count);
        parallel_for(count, [&](std::size_t i) { res[i] = msd_check(f, xs[i], as_int(H, "H"), delta); });
        json rows = json::array();
        double worst = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            json r = to_json(res[i]);
            r["x"] = xs[i];
            rows.push_back(r);
            worst = std::max(worst, res[i].normalized);
        }
        o.results = {{"runs", rows}, {"max_normalized", worst}};
        if (max_ratio >= 0) o.assertions.emplace_back("lhs/H^2 <= max-ratio", worst <= max_ratio);
        return o;
    }
};

struct GraphOpts {
    std::string spec = "liouville";
    FamilyOpts fam;
    double eta = 0.1, tau = 0.01, geom_tol = -1, freq_tol = -1;
    std::uint64_t P1 = 20, P2 = 0;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        fam.mode = "strict";
        fam.add(s, false);
        s->add_option("--eta", eta, "minimum strength for a vertex");
        s->add_option("--tau", tau, "sup tolerance for the frequencies");
        s->add_option("--P1", P1, "p1, p2 in [P1, 2 P1]");
        s->add_option("--P2", P2, "second primes in [P2/2, P2]; 0 = single scale");
        s->add_option("--geom-tol", geom_tol, "geometric tolerance (negative = default)");
        s->add_option("--freq-tol", freq_tol, "frequency tolerance (negative = default)");
    }

    PrimeRatioGraph build() const {
        const auto freqs = assign_frequencies(parse_function_spec(spec), fam.build(), eta, tau);
        GraphOptions opt;
        opt.P1 = P1;
        opt.P2 = P2;
        opt.geom_tol = geom_tol;
        opt.freq_tol = freq_tol;
        return build_graph(freqs, opt);
    }
};

struct GraphCmd {
    GraphOpts g;
    std::string edges_csv;

    void add(CLI::App* s) {
        g.add(s);
        s->add_option("--edges-csv", edges_csv, "write the edge list here");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "interval/frequency prime-ratio graph";
        const auto graph = g.build();
        o.results = to_json(graph);
        const double sep = min_ratio_separation(graph);
        o.results["min_ratio_separation"] = std::isfinite(sep) ? json(sep) : json(nullptr);
        o.csv = graph_csv(graph);
        if (!edges_csv.empty()) write_text(edges_csv, o.csv);
        const double bound = 1.0 / (4.0 * static_cast<double>(g.P1) * static_cast<double>(g.P1));
        o.assertions.emplace_back("ratio separation >= 1/(4 P1^2)", !std::isfinite(sep) || sep >= bound);
        return o;
    }
};

struct WalksCmd {
    std::string graph = "complete";
    std::size_t n = 5;
    std::vector<unsigned> k{2, 4, 6};
    GraphOpts g;

    void add(CLI::App* s) {
        s->add_option("--graph", graph, "complete, path or prime-ratio");
        s->add_option("--n", n, "vertices for complete/path");
        s->add_option("--k", k, "walk lengths");
        g.add(s);
    }

    Outcome run() const {
        Outcome o;
        o.ref = "walk counts and the Blakley-Roy margin";
        SimpleGraph sg;
        if (graph == "complete") sg = SimpleGraph::complete(n);
        else if (graph == "path") sg = SimpleGraph::path(n);
        else if (graph == "prime-ratio") sg = SimpleGraph::from(g.build());
        else throw ParameterError("--graph must be complete, path or prime-ratio");
        json rows = json::array();
        bool ok = true;
        for (unsigned kk : k) {
            const auto w = walk_count(sg, kk);
            rows.push_back(to_json(w));
            ok = ok && sgn(w.margin) >= 0;
        }
        o.results = {{"vertices", sg.n}, {"edges", sg.edges.size()}, {"walks", rows}};
        o.assertions.emplace_back("margin >= 0", ok);
        return o;
    }
};

struct ProductsCmd {
    unsigned k = 2;
    std::uint64_t P = 50, q = 1;
    double window = -1, C = 1, N = -1;

    void add(CLI::App* s) {
        s->add_option("--k", k, "primes per side");
        s->add_option("--P", P, "primes in [P, 2P]");
        s->add_option("--q", q, "congruence modulus");
        s->add_option("--window", window, "explicit window (negative = C P^k / N)");
        s->add_option("--C", C);
        s->add_option("--N", N, "negative = P");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "nearby products of primes";
        const double n = N > 0 ? N : static_cast<double>(P);
        const double w = window >= 0 ? window : C * std::pow(static_cast<double>(P), k) / n;
        const auto c = count_prime_products(k, P, w, q);
        const auto c1 = count_prime_products(k, P, w, 1);
        const double lp = std::log(static_cast<double>(P));
        const double scale = std::pow(static_cast<double>(P), 2.0 * k) / (n * std::pow(lp, 2.0 * k));
        o.results = to_json(c);
        o.results["count_q1"] = c1.count.get_str();
        o.results["window_requested"] = w;
        o.results["scale"] = scale;
        o.results["ratio"] = c.count.get_d() / scale;
        o.assertions.emplace_back("count(q) <= count(1)", c.count <= c1.count);
        return o;
    }
};

struct MixingCmd {
    FamilyOpts fam;
    std::uint64_t P = 100;
    double geom_tol = -1;

    void add(CLI::App* s) {
        fam.add(s, false);
        s->add_option("--P", P, "primes in [P, 2P]");
        s->add_option("--geom-tol", geom_tol, "negative = 100 H / P");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "mixing count of prime-dilated interval pairs";
        const auto family = fam.build();
        const double tol = geom_tol >= 0 ? geom_tol : 100.0 * static_cast<double>(family.H) / static_cast<double>(P);
        const auto m = mixing_count(family.intervals, family.intervals, P, tol, family.X);
        o.results = to_json(m);
        o.results["intervals"] = family.intervals.size();
        o.results["geom_tol"] = tol;
        return o;
    }
};

struct FitCmd {
    std::string spec = "archimedean(50000)";
    FamilyOpts fam;
    double eta = 0.5, tau = 0.001, cluster_radius = -1, rho = 0.1, T_max = -1, anchor = 0.5;
    double synthetic_T = 0;
    std::uint32_t q_max = 4, synthetic_q = 1;
    bool full = false;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor for the frequencies");
        fam.add(s, false);
        s->add_option("--eta", eta, "minimum strength");
        s->add_option("--tau", tau, "sup tolerance");
        s->add_option("--q-max", q_max);
        s->add_option("--cluster-radius", cluster_radius, "negative = X / H^(1-rho)");
        s->add_option("--rho", rho);
        s->add_option("--T-max", T_max, "negative = X^2 / H^(2-rho)");
        s->add_option("--anchor", anchor, "anchor point x + anchor*H");
        s->add_option("--synthetic-T", synthetic_T, "fit exact alpha = T/(2 pi c) + a/q instead");
        s->add_option("--synthetic-q", synthetic_q, "denominator of the synthetic shifts");
        s->add_flag("--full", full, "include per-interval residues and residuals");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "global T/x frequency model";
        const auto family = fam.build();
        FrequencyAssignment fa;
        if (synthetic_T != 0) {
            fa.family = family;
            std::mt19937_64 rng(fam.seed);
            for (const auto& I : family.intervals) {
                const double c = static_cast<double>(I.x) + anchor * static_cast<double>(I.H);
                double a = synthetic_T / (2.0 * std::numbers::pi * c);
                if (synthetic_q > 1) a += static_cast<double>(rng() % synthetic_q) / synthetic_q;
                fa.alpha.push_back(a - std::floor(a));
                fa.strength.push_back(1.0);
            }
        } else {
            fa = assign_frequencies(parse_function_spec(spec), family, eta, tau);
        }
        FitOptions opt{q_max, cluster_radius, rho, 0.0, T_max, anchor};
        const auto fit = fit_frequency_model(fa, opt);
        o.results = to_json(fit);
        if (!full) {
            o.results.erase("residues");
            o.results.erase("residuals");
            o.results.erase("used");
        }
        o.results["intervals"] = fa.alpha.size();
        return o;
    }
};

SequenceSpec seq(const std::string& s) { return parse_sequence_spec(s); }

struct TripleCmd {
    std::string f = "liouville", a = "mangoldt", b = "mangoldt", method = "direct";
    double X = 1e5, H = 50;
    bool check = false, holder = false;

    void add(CLI::App* s) {
        s->add_option("--f", f, "bounded multiplicative function");
        s->add_option("--a", a, "sequence at n+h");
        s->add_option("--b", b, "sequence at n+2h");
        s->add_option("--X", X);
        s->add_option("--H", H);
        s->add_option("--method", method, "direct, spectral or both");
        s->add_flag("--check-identity", check, "run both paths and assert agreement");
        s->add_flag("--holder", holder, "also evaluate the Holder chain");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "Fejer-weighted triple correlation";
        const auto ff = parse_function_spec(f);
        const auto aa = seq(a), bb = seq(b);
        const auto x = as_int(X, "X"), h = as_int(H, "H");
        CorrelationReport r;
        if (check || method == "both") r = triple_both(ff, aa, bb, x, h);
        else if (method == "direct") r = triple_direct(ff, aa, bb, x, h);
        else if (method == "spectral") r = triple_spectral(ff, aa, bb, x, h);
        else throw ParameterError("--method must be direct, spectral or both");
        o.results = to_json(r);
        o.csv = correlation_csv_header() + "\n" + correlation_csv_row(r) + "\n";
        if (check) o.assertions.emplace_back("rel_gap <= 1e-6", r.rel_gap <= 1e-6);
        if (holder) {
            const auto hr = holder_chain_check(ff, aa, bb, x, h);
            o.results["holder"] = to_json(hr);
            o.assertions.emplace_back("|triple| <= Holder chain", hr.chain_holds);
        }
        return o;
    }
};

struct ChowlaCmd {
    std::string spec = "liouville";
    double X = 1e6;
    std::vector<double> H{10, 100, 1000};
    double max_value = -1;

    void add(CLI::App* s) {
        s->add_option("--spec", spec, "function descriptor");
        s->add_option("--X", X);
        s->add_option("--H", H, "one or more shift ranges");
        s->add_option("--max", max_value, "assert the statistic at the largest H is <= this");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "averaged two-point correlation";
        const auto f = parse_function_spec(spec);
        json rows = json::array();
        double last = 0.0;
        for (double h : H) {
            const auto r = averaged_chowla2(f, as_int(X, "X"), as_int(h, "H"));
            rows.push_back({{"H", as_int(h, "H")}, {"normalized", r.normalized}});
            last = r.normalized;
        }
        o.results = {{"rows", rows}};
        if (max_value >= 0) o.assertions.emplace_back("statistic <= max", last <= max_value);
        return o;
    }
};

struct L3Cmd {
    std::string a = "mangoldt";
    double x = 1e5, H = 1000, max_ratio = -1;

    void add(CLI::App* s) {
        s->add_option("--a", a, "sequence");
        s->add_option("--x", x, "window (x, x+2H]");
        s->add_option("--H", H);
        s->add_option("--max-ratio", max_ratio, "assert the ratio is <= this");
    }

    Outcome run() const {
        Outcome o;
        o.ref = "cubic moment of a windowed exponential sum";
        const auto r = l3_bound_check(seq(a), as_int(x, "x"), as_int(H, "H"));
        o.results = to_json(r);
        if (max_ratio >= 0) o.assertions.emplace_back("ratio <= max-ratio", r.ratio <= max_ratio);
        return o;
    }
};

struct SuiteCmd {
    std::vector<int> criteria;
    unsigned alt_threads = 8;

    void add(CLI::App* s) {
        s->add_option("--criteria", criteria, "subset of 1..13 (default all)");
        s->add_option("--alt-threads", alt_threads, "thread count for the determinism rerun");
    }

    Outcome run(unsigned threads) const {
        Outcome o;
        o.ref = "acceptance battery";
        const auto ids = criteria.empty() ? criterion_ids() : criteria;
        const auto res = run_suite(ids, threads, alt_threads);
        json rows = json::array();
        for (const auto& c : res) {
            rows.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"payload", c.payload}});
            o.assertions.emplace_back("criterion " + std::to_string(c.id), c.pass);
            std::cerr << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- "
                      << c.detail << "\n";
        }
        o.results = {{"criteria", rows}};
        return o;
    }
};

// Inserts "--key value" pairs from a JSON config file for keys not already
// given on the command line, so flags override the file.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end()) return args;
    if (it + 1 == args.end()) throw ParameterError("--config needs a file");
    const std::string path = *(it + 1);
    args.erase(it, it + 2);
    std::ifstream f(path);
    if (!f) throw ParameterError("cannot read config " + path);
    json cfg = json::parse(f);
    if (!cfg.is_object()) throw ParameterError("config must be a JSON object");
    if (cfg.contains("command")) {
        const bool have_cmd = args.size() > 1 && args[1].rfind("--", 0) != 0;
        if (!have_cmd) args.insert(args.begin() + 1, cfg["command"].get<std::string>());
        cfg.erase("command");
    }
    for (const auto& [key, val] : cfg.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (val.is_boolean()) {
            if (val.get<bool>()) args.push_back(flag);
        } else if (val.is_array()) {
            args.push_back(flag);
            for (const auto& x : val) args.push_back(scalar(x));
        } else if (!val.is_null()) {
            args.push_back(flag);
            args.push_back(scalar(val));
        }
    }
    return args;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"unilab: short-interval exponential sums and multiplicative functions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());
    app.add_option("--config", "JSON file with option values; explicit flags win");

    Common common;
    SieveCmd sieve;
    SupCmd sup;
    UniformityCmd unif;
    FixedAlphaCmd fixed;
    ArchCmd arch;
    DistanceCmd dist;
    MsdCmd msd;
    GraphCmd graph;
    WalksCmd walks;
    ProductsCmd prod;
    MixingCmd mix;
    FitCmd fit;
    TripleCmd triple;
    ChowlaCmd chowla;
    L3Cmd l3;
    SuiteCmd suite;

    std::vector<std::pair<CLI::App*, std::function<Outcome()>>> cmds;
    auto reg = [&](const char* name, const char* desc, auto& cmd) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->option_defaults()->always_capture_default();
        cmd.add(s);
        s->add_option("--threads", common.threads, "worker threads");
        s->add_option("--out", common.out, "JSON report destination ('-' = stdout)");
        s->add_option("--csv", common.csv, "CSV destination, where a schema exists ('-' = stdout)");
        return s;
    };
    cmds.emplace_back(reg("sieve", "tables of lambda, mu, Lambda or primes", sieve), [&] { return sieve.run(); });
    cmds.emplace_back(reg("supscan", "certified sup_alpha on short intervals", sup), [&] { return sup.run(); });
    cmds.emplace_back(reg("uniformity", "Fourier-uniformity statistic", unif), [&] { return unif.run(); });
    cmds.emplace_back(reg("fixedalpha", "fixed-frequency averages", fixed), [&] { return fixed.run(); });
    cmds.emplace_back(reg("archdemo", "n^{it} at alpha = t/(2 pi x)", arch), [&] { return arch.run(); });
    cmds.emplace_back(reg("distance", "pretentious distance", dist), [&] { return dist.run(); });
    cmds.emplace_back(reg("msd", "mean-scales-down check", msd), [&] { return msd.run(); });
    cmds.emplace_back(reg("graph", "prime-ratio graph", graph), [&] { return graph.run(); });
    cmds.emplace_back(reg("walks", "walk counts", walks), [&] { return walks.run(); });
    cmds.emplace_back(reg("primeproducts", "nearby prime products", prod), [&] { return prod.run(); });
    cmds.emplace_back(reg("mixing", "mixing counts", mix), [&] { return mix.run(); });
    cmds.emplace_back(reg("fitmodel", "T/x frequency model", fit), [&] { return fit.run(); });
    cmds.emplace_back(reg("triple", "triple correlations", triple), [&] { return triple.run(); });
    cmds.emplace_back(reg("chowla2", "averaged two-point correlations", chowla), [&] { return chowla.run(); });
    cmds.emplace_back(reg("l3check", "cubic moment check", l3), [&] { return l3.run(); });
    CLI::App* suite_app = reg("suite", "run the acceptance battery", suite);
    suite_app->alias("acceptance");
    cmds.emplace_back(suite_app, [&] { return suite.run(common.threads); });

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = merge_config(args);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    for (auto& [sub, fn] : cmds) {
        if (!sub->parsed()) continue;
        try {
            set_thread_count(std::max(common.threads, 1u));
            Outcome o = fn();
            json asserts = json::array();
            bool ok = true;
            for (const auto& [name, pass] : o.assertions) {
                asserts.push_back({{"name", name}, {"pass", pass}});
                ok = ok && pass;
            }
            o.results["assertions"] = asserts;
            auto report = make_report(sub->get_name(), resolved_config(sub), o.results, o.ref);
            report["metadata"]["threads"] = common.threads;
            if (!common.csv.empty()) {
                if (o.csv.empty()) throw ParameterError(sub->get_name() + " has no CSV schema");
                write_text(common.csv, o.csv);
            }
            if (!(common.csv == "-" && common.out == "-")) write_text(common.out, report.dump(2) + "\n");
            return ok ? 0 : 1;
        } catch (const CertificationError& e) {
            std::cerr << "certification failed: " << e.what() << " (best alpha " << e.best_alpha()
                      << ", value " << e.best_value() << ", bound " << e.upper_bound() << ")\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}

}  // namespace unilab::app

#include "unilab/correlations.hpp"

#include "unilab/error.hpp"
#include "unilab/expsum.hpp"
#include "unilab/fft.hpp"
#include "unilab/parallel.hpp"
#include "unilab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace unilab {

SequenceSpec SequenceSpec::one() { return {}; }

SequenceSpec SequenceSpec::mangoldt() {
    SequenceSpec s;
    s.kind = Kind::mangoldt;
    return s;
}

SequenceSpec SequenceSpec::bounded(FunctionSpec f) {
    SequenceSpec s;
    s.kind = Kind::bounded;
    s.f = std::move(f);
    return s;
}

SequenceSpec SequenceSpec::custom(std::vector<cplx> values) {
    SequenceSpec s;
    s.kind = Kind::table;
    s.table = std::move(values);
    return s;
}

std::string SequenceSpec::name() const {
    switch (kind) {
    case Kind::one: return "one";
    case Kind::mangoldt: return "mangoldt";
    case Kind::bounded: return f.name();
    case Kind::table: return "table(" + std::to_string(table.size()) + ")";
    }
    return "unknown";
}

SequenceSpec parse_sequence_spec(const std::string& text) {
    if (text == "one") return SequenceSpec::one();
    if (text == "mangoldt" || text == "lambda_big" || text == "Lambda") return SequenceSpec::mangoldt();
    return SequenceSpec::bounded(parse_function_spec(text));
}

std::vector<cplx> sequence_values(const SequenceSpec& a, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw ParameterError("sequence_values requires lo <= hi");
    std::vector<cplx> out(static_cast<std::size_t>(hi - lo), 0.0);
    if (a.kind == SequenceSpec::Kind::one) {
        std::fill(out.begin(), out.end(), cplx{1.0, 0.0});
        return out;
    }
    const std::int64_t start = std::max<std::int64_t>(lo, 1);
    if (start >= hi) return out;
    const auto off = static_cast<std::size_t>(start - lo);
    switch (a.kind) {
    case SequenceSpec::Kind::mangoldt: {
        if (static_cast<std::uint64_t>(hi) > kSieveLimit) throw CoverageError("mangoldt range exceeds 2e9");
        for (std::int64_t s = start; s < hi; s += static_cast<std::int64_t>(kMaxSegment)) {
            const std::int64_t e = std::min<std::int64_t>(hi, s + static_cast<std::int64_t>(kMaxSegment));
            const auto t = sieve_range(TableKind::mangoldt, static_cast<std::uint64_t>(s),
                                       static_cast<std::uint64_t>(e));
            const auto logs = t.logs();
            for (std::size_t i = 0; i < logs.size(); ++i) out[static_cast<std::size_t>(s - lo) + i] = logs[i];
        }
        break;
    }
    case SequenceSpec::Kind::bounded: {
        const auto v = evaluate(a.f, static_cast<std::uint64_t>(start), static_cast<std::uint64_t>(hi));
        std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
        break;
    }
    case SequenceSpec::Kind::table:
        for (std::int64_t n = start; n < hi; ++n)
            if (static_cast<std::size_t>(n) <= a.table.size())
                out[static_cast<std::size_t>(n - lo)] = a.table[static_cast<std::size_t>(n - 1)];
        break;
    case SequenceSpec::Kind::one: break;
    }
    return out;
}

std::string correlation_csv_header() {
    return "X,H,f,a,b,value_direct,value_spectral,rel_gap,normalized";
}

std::string correlation_csv_row(const CorrelationReport& r) {
    auto num = [](const std::optional<cplx>& v) {
        if (!v) return std::string();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v->real());
        return std::string(buf);
    };
    char buf[1024];
    std::snprintf(buf, sizeof buf, "%lld,%lld,\"%s\",\"%s\",\"%s\",%s,%s,%.17g,%.17g",
                  static_cast<long long>(r.X), static_cast<long long>(r.H), r.f.c_str(), r.a.c_str(),
                  r.b.c_str(), num(r.value_direct).c_str(), num(r.value_spectral).c_str(), r.rel_gap,
                  r.normalized.real());
    return buf;
}

namespace {

void check_xh(std::int64_t X, std::int64_t H) {
    if (X < 1) throw ParameterError("correlation requires X >= 1");
    if (H < 1) throw ParameterError("correlation requires H >= 1");
}

void fill_norms(CorrelationReport& rep, cplx value) {
    const double hx = static_cast<double>(rep.H) * static_cast<double>(rep.X);
    rep.normalized = value / hx;
    const double lx = std::log(static_cast<double>(std::max<std::int64_t>(rep.X, 2)));
    rep.log_normalized = value / (hx * lx * lx);
}

CorrelationReport blank(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                        std::int64_t X, std::int64_t H) {
    CorrelationReport rep;
    rep.X = X;
    rep.H = H;
    rep.f = f.name();
    rep.a = a.name();
    rep.b = b.name();
    return rep;
}

}  // namespace

CorrelationReport triple_direct(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                                std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    if (static_cast<double>(X) * static_cast<double>(H) > 1e10)
        throw BudgetError("triple_direct budget X*H <= 1e10 exceeded; use triple_spectral");
    const auto F = evaluate(f, 1, static_cast<std::uint64_t>(X) + 1);
    const std::int64_t a_lo = 1 - H, b_lo = 1 - 2 * H;
    const auto A = sequence_values(a, a_lo, X + H + 1);
    const auto B = sequence_values(b, b_lo, X + 2 * H + 1);

    std::vector<cplx> inner(static_cast<std::size_t>(2 * H + 1));
    parallel_for(inner.size(), [&](std::size_t k) {
        const std::int64_t h = static_cast<std::int64_t>(k) - H;
        cplx s{0.0, 0.0};
        for (std::int64_t n = 1; n <= X; ++n)
            s += F[static_cast<std::size_t>(n - 1)] * A[static_cast<std::size_t>(n + h - a_lo)] *
                 B[static_cast<std::size_t>(n + 2 * h - b_lo)];
        inner[k] = s;
    });
    cplx value{0.0, 0.0};
    const double Hd = static_cast<double>(H);
    for (std::size_t k = 0; k < inner.size(); ++k) {
        const double h = std::abs(static_cast<double>(static_cast<std::int64_t>(k) - H));
        value += (1.0 - h / Hd) * inner[k];
    }
    auto rep = blank(f, a, b, X, H);
    rep.value_direct = value;
    fill_norms(rep, value);
    return rep;
}

cplx window_integral(std::span<const cplx> f, std::span<const cplx> b, std::span<const cplx> a) {
    const std::size_t W = f.size();
    if (b.size() != W || a.size() != W) throw ParameterError("window_integral needs equal windows");
    const std::size_t L = fft::next_pow2(4 * W);  // 4W = 8H > max |n + m - 2k|
    std::vector<cplx> sf(L, 0.0), sb(L, 0.0), sa(L, 0.0);
    for (std::size_t r = 0; r < W; ++r) {
        sf[r + 1] = f[r];
        sb[r + 1] = b[r];
        sa[r + 1] = a[r];
    }
    fft::backward(sf);
    fft::backward(sb);
    fft::forward(sa);
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < L; ++j) acc += sf[j] * sb[j] * sa[(2 * j) % L];
    return acc / static_cast<double>(L);
}

CorrelationReport triple_spectral(const FunctionSpec& f, const SequenceSpec& a,
                                  const SequenceSpec& b, std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    const std::int64_t lo = 1 - 2 * H;      // first window start
    const std::int64_t hi = X - 1;          // last window start
    const std::int64_t base = lo + 1;       // first position touched
    const std::int64_t top = hi + 2 * H;    // last position touched
    auto F = sequence_values(SequenceSpec::bounded(f), base, top + 1);
    for (std::int64_t n = base; n <= top; ++n)
        if (n > X) F[static_cast<std::size_t>(n - base)] = 0.0;
    const auto A = sequence_values(a, base, top + 1);
    const auto B = sequence_values(b, base, top + 1);

    const auto W = static_cast<std::size_t>(2 * H);
    const auto windows = static_cast<std::size_t>(hi - lo + 1);
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (windows + kChunk - 1) / kChunk;
    std::vector<cplx> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        cplx s{0.0, 0.0};
        for (std::size_t w = c * kChunk; w < std::min(windows, (c + 1) * kChunk); ++w) {
            // window (x, x+2H] with x = lo + w starts at position x + 1 = base + w
            s += window_integral(std::span(F).subspan(w, W), std::span(B).subspan(w, W),
                                 std::span(A).subspan(w, W));
        }
        partial[c] = s;
    });
    cplx value{0.0, 0.0};
    for (const auto& p : partial) value += p;
    value /= static_cast<double>(2 * H);

    auto rep = blank(f, a, b, X, H);
    rep.value_spectral = value;
    fill_norms(rep, value);
    return rep;
}

CorrelationReport triple_both(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                              std::int64_t X, std::int64_t H) {
    auto rep = triple_direct(f, a, b, X, H);
    const auto spec = triple_spectral(f, a, b, X, H);
    rep.value_spectral = spec.value_spectral;
    const double scale = std::max(std::abs(*rep.value_direct), 1e-300);
    rep.rel_gap = std::abs(*rep.value_direct - *rep.value_spectral) / scale;
    return rep;
}

ChowlaReport averaged_chowla2(const FunctionSpec& f, std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    if (X > 100'000'000) throw ParameterError("averaged_chowla2 requires X <= 1e8");
    const auto vals = evaluate(f, 1, static_cast<std::uint64_t>(X + H) + 1);
    const std::size_t L = fft::next_pow2(static_cast<std::size_t>(2 * (X + H)));
    std::vector<cplx> U(L, 0.0), V(L, 0.0);
    for (std::int64_t n = 1; n <= X; ++n) U[static_cast<std::size_t>(n)] = vals[static_cast<std::size_t>(n - 1)];
    for (std::int64_t n = 1; n <= X + H; ++n) V[static_cast<std::size_t>(n)] = vals[static_cast<std::size_t>(n - 1)];
    fft::forward(U);
    fft::forward(V);
    for (std::size_t k = 0; k < L; ++k) V[k] *= std::conj(U[k]);
    fft::backward(V);  // V[h mod L] = L * conj(sum_n f(n) conj f(n+h))

    ChowlaReport rep;
    rep.inner.resize(static_cast<std::size_t>(2 * H + 1));
    double total = 0.0;
    for (std::int64_t h = -H; h <= H; ++h) {
        const auto idx = static_cast<std::size_t>((h + static_cast<std::int64_t>(L)) % static_cast<std::int64_t>(L));
        const double v = std::abs(V[idx]) / static_cast<double>(L);
        rep.inner[static_cast<std::size_t>(h + H)] = v;
        total += v;
    }
    rep.normalized = total / (static_cast<double>(H) * static_cast<double>(X));
    return rep;
}

double chowla2_unimodular_closed_form(std::int64_t X, std::int64_t H) {
    const double Xd = static_cast<double>(X), Hd = static_cast<double>(H);
    return ((2.0 * Hd + 1.0) * Xd - Hd * (Hd + 1.0) / 2.0) / (Hd * Xd);
}

double l3_integral(std::span<const cplx> window, std::size_t grid) {
    if (grid <= window.size()) throw ParameterError("l3 grid must exceed the window length");
    std::vector<cplx> buf(grid, 0.0);
    for (std::size_t r = 0; r < window.size(); ++r) buf[r + 1] = window[r];
    fft::forward(buf);
    double s = 0.0;
    for (const auto& v : buf) {
        const double m = std::abs(v);
        s += m * m * m;
    }
    return s / static_cast<double>(grid);
}

L3Report l3_bound_check(const SequenceSpec& a, std::int64_t x, std::int64_t H) {
    if (H < 1) throw ParameterError("l3_bound_check requires H >= 1");
    const auto w = sequence_values(a, x + 1, x + 2 * H + 1);
    L3Report rep;
    rep.grid = static_cast<std::size_t>(16 * H);
    rep.integral = l3_integral(w, rep.grid);
    rep.ratio = rep.integral / (static_cast<double>(H) * static_cast<double>(H));
    return rep;
}

HolderReport holder_chain_check(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                                std::int64_t X, std::int64_t H, double tau) {
    check_xh(X, H);
    const auto tri = triple_spectral(f, a, b, X, H);
    const std::int64_t lo = 1 - 2 * H, hi = X - 1;
    const std::int64_t base = lo + 1, top = hi + 2 * H;
    auto F = sequence_values(SequenceSpec::bounded(f), base, top + 1);
    for (std::int64_t n = base; n <= top; ++n)
        if (n > X) F[static_cast<std::size_t>(n - base)] = 0.0;
    const auto A = sequence_values(a, base, top + 1);
    const auto B = sequence_values(b, base, top + 1);
    const auto W = static_cast<std::size_t>(2 * H);
    const auto windows = static_cast<std::size_t>(hi - lo + 1);
    const auto grid = static_cast<std::size_t>(16 * H);

    std::vector<double> chain(windows), sups(windows);
    parallel_for(windows, [&](std::size_t w) {
        const auto fw = std::span<const cplx>(F).subspan(w, W);
        double l2 = 0.0;
        for (const auto& v : fw) l2 += std::norm(v);
        const double sup = l2 == 0.0 ? 0.0 : sup_alpha_coeffs(fw, tau).upper_bound;
        const double la = l3_integral(std::span<const cplx>(A).subspan(w, W), grid);
        const double lb = l3_integral(std::span<const cplx>(B).subspan(w, W), grid);
        sups[w] = sup;
        chain[w] = std::cbrt(sup) * std::cbrt(la) * std::cbrt(lb) * std::cbrt(l2);
    });
    HolderReport rep;
    rep.lhs = std::abs(*tri.value_spectral);
    for (std::size_t w = 0; w < windows; ++w) {
        rep.chain += chain[w];
        rep.sup_integral += sups[w];
    }
    rep.chain /= static_cast<double>(2 * H);
    rep.end_bound = std::cbrt(static_cast<double>(H) * static_cast<double>(H)) *
                    std::cbrt(static_cast<double>(X) * static_cast<double>(X)) * std::cbrt(rep.sup_integral);
    rep.chain_holds = rep.lhs <= rep.chain * (1.0 + 1e-9);
    return rep;
}

}  // namespace unilab

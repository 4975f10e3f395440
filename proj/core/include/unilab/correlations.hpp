// Fejer-weighted correlations sum_{|h|<=H} (1 - |h|/H) sum_{n<=X} f(n) a(n+h) b(n+2h),
// evaluated directly and through windowed exponential sums.
//
// Window bookkeeping for the spectral path. With
//   S_{x,g}(alpha) = sum_{x < n <= x+2H} g(n) e(alpha n),
// the integral over alpha in [0,1) of S_{x,f}(alpha) S_{x,b}(alpha) S_{x,a}(-2 alpha)
// counts triples (n, n+h, n+2h) lying in (x, x+2H]. A triple of span 2|h| sits
// in exactly 2H - 2|h| windows, so summing over every integer x in
// [1-2H, X-1] and dividing by 2H reproduces the weight 1 - |h|/H exactly.
// Restricting f to [1, X] keeps n <= X. Each window integral is the mean of
// the integrand over a grid of L >= 8H points: the integrand is a
// trigonometric polynomial with frequencies n + m - 2k in (-4H, 4H).
#pragma once

#include "unilab/function_spec.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace unilab {

struct SequenceSpec {
    enum class Kind { one, mangoldt, bounded, table };
    Kind kind = Kind::one;
    FunctionSpec f;
    std::vector<cplx> table;  // a(1), a(2), ...; zero past the end

    static SequenceSpec one();
    static SequenceSpec mangoldt();
    static SequenceSpec bounded(FunctionSpec f);
    static SequenceSpec custom(std::vector<cplx> values);

    std::string name() const;
};

// Parses "one", "mangoldt" (or "lambda_big"), or any FunctionSpec descriptor.
SequenceSpec parse_sequence_spec(const std::string& text);

// a(n) for integer n in [lo, hi). The constant sequence is 1 at every
// integer; all other kinds vanish at n <= 0.
std::vector<cplx> sequence_values(const SequenceSpec& a, std::int64_t lo, std::int64_t hi);

struct CorrelationReport {
    std::int64_t X = 0;
    std::int64_t H = 0;
    std::string f, a, b;
    std::optional<cplx> value_direct;
    std::optional<cplx> value_spectral;
    double rel_gap = 0.0;
    cplx normalized{0.0, 0.0};     // value / (H X)
    cplx log_normalized{0.0, 0.0}; // value / (H X log^2 X)
};

std::string correlation_csv_header();
std::string correlation_csv_row(const CorrelationReport& r);

// Requires X H <= 1e10.
CorrelationReport triple_direct(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                                std::int64_t X, std::int64_t H);

CorrelationReport triple_spectral(const FunctionSpec& f, const SequenceSpec& a,
                                  const SequenceSpec& b, std::int64_t X, std::int64_t H);

// Runs both paths and fills rel_gap.
CorrelationReport triple_both(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                              std::int64_t X, std::int64_t H);

// Integral over one window (x, x+2H] by the grid mean.
cplx window_integral(std::span<const cplx> f, std::span<const cplx> b, std::span<const cplx> a);

struct ChowlaReport {
    double normalized = 0.0;       // (1/HX) sum_{|h|<=H} |sum_{n<=X} f(n) conj f(n+h)|
    std::vector<double> inner;     // |inner sum| for h = -H..H
};

// Requires X <= 1e8.
ChowlaReport averaged_chowla2(const FunctionSpec& f, std::int64_t X, std::int64_t H);

// Closed form of averaged_chowla2 for |f| = 1 with perfect correlation.
double chowla2_unimodular_closed_form(std::int64_t X, std::int64_t H);

struct L3Report {
    double integral = 0.0;  // int_0^1 |S_{x,a}|^3
    double ratio = 0.0;     // integral / H^2
    std::size_t grid = 0;
};

// Window (x, x+2H], periodic trapezoid rule on 16H points.
L3Report l3_bound_check(const SequenceSpec& a, std::int64_t x, std::int64_t H);
double l3_integral(std::span<const cplx> window, std::size_t grid);

struct HolderReport {
    double lhs = 0.0;             // |triple|
    double chain = 0.0;           // (1/2H) sum_x sup|S_f|^{1/3} |S_b|_3 |S_a|_3 |S_f|_2^{2/3}
    double sup_integral = 0.0;    // sum_x sup_alpha |S_{x,f}|
    double end_bound = 0.0;       // H^{2/3} X^{2/3} (sum_x sup)^{1/3}
    bool chain_holds = false;
};

HolderReport holder_chain_check(const FunctionSpec& f, const SequenceSpec& a, const SequenceSpec& b,
                                std::int64_t X, std::int64_t H, double tau = 0.05);

}  // namespace unilab

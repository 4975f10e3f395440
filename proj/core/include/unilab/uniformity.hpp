// (X,H)-families of intervals and the averaged Fourier-uniformity statistics
// built on them.
#pragma once

#include "unilab/expsum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace unilab {

enum class FamilyMode { strict, dense };

const char* to_string(FamilyMode mode);

// Strict families live on the lattice ((500l + v)H + y, (500l + v + 1)H + y]
// so consecutive left endpoints are 500H apart. Dense families tile
// [X/10, 10X] from ceil(X/10) with no offset. Both are clipped to
// (x, x+H] inside [X/10, 10X] and capped at X/H members.
struct IntervalFamily {
    std::int64_t X = 0;
    std::int64_t H = 0;
    FamilyMode mode = FamilyMode::strict;
    std::int64_t y = 0;
    std::int64_t v = 0;
    std::uint64_t seed = 0;
    std::size_t capacity = 0;
    std::vector<Interval> intervals;
};

// Number of lattice intervals available before sampling.
std::size_t family_capacity(std::int64_t X, std::int64_t H, FamilyMode mode, std::uint64_t seed);

// M = 0 takes the whole lattice (up to capacity). Otherwise M lattice slots
// are chosen by seeded stratified sampling over [X/10, 10X], one per stratum.
IntervalFamily build_family(std::int64_t X, std::int64_t H, FamilyMode mode, std::uint64_t seed,
                            std::size_t M = 0);

struct ToleranceConfig {
    double eta = 0.1;
    double epsilon = 0.0005;
    double rho = 0.1;
    double theta = 0.5;
    double delta = 0.5;
    std::uint64_t seed = 1;

    void validate() const;
};

struct IntervalRecord {
    std::int64_t x = 0;
    double alpha = 0.0;
    double value = 0.0;  // normalised by H
};

struct UniformityReport {
    std::int64_t X = 0;
    std::int64_t H = 0;
    std::size_t M = 0;
    std::uint64_t seed = 0;
    double tau = 0.0;
    double U = 0.0;
    double q10 = 0.0, q50 = 0.0, q90 = 0.0;
    std::vector<IntervalRecord> records;
};

std::string uniformity_csv_header();
std::string uniformity_csv_row(const UniformityReport& r);

// Type-7 sample quantile.
double quantile(std::vector<double> values, double q);

// Mean over the family of sup_alpha |S_I(alpha)| / H.
UniformityReport uniformity_statistic(const FunctionSpec& spec, const IntervalFamily& family,
                                      double tau);

// Samples M intervals of the dense family (M = 0 means min(X/H, 512)).
UniformityReport uniformity_statistic(const FunctionSpec& spec, std::int64_t X, std::int64_t H,
                                      const ToleranceConfig& cfg, std::size_t M = 0,
                                      double tau = 0.01);

struct FixedAlphaReport {
    std::vector<double> alphas;
    std::vector<double> values;  // mean over intervals of |S_I(alpha)| / H
    double max = 0.0;
    std::size_t argmax = 0;
};

FixedAlphaReport fixed_alpha_statistic(const FunctionSpec& spec, const IntervalFamily& family,
                                       const std::vector<double>& alphas);

// Uses the whole dense family.
FixedAlphaReport fixed_alpha_statistic(const FunctionSpec& spec, std::int64_t X, std::int64_t H,
                                       const std::vector<double>& alphas);

// Candidates a/q for 1 <= q <= Q, 0 <= a < q, gcd(a, q) = 1, sorted.
std::vector<double> rational_candidates(std::uint32_t Q);

// For f(n) = n^{it}: evaluates |S_I(t / (2 pi x_I))| / H on each interval.
UniformityReport archimedean_demo(double t, const IntervalFamily& family);
UniformityReport archimedean_demo(double t, std::int64_t X, std::int64_t H);

// Pigeonhole over the 500 lattice slots for data a(n) on [1, 3X]: for each
// slot v, the number of lattice intervals with X/(500H) <= l <= X/(250H)
// whose certified sup is at least eta*H/2.
struct SlotScan {
    std::vector<std::size_t> counts;  // one per v in [0, 500)
    std::size_t best_v = 0;
    std::size_t best_count = 0;
    double guarantee = 0.0;           // eta X / (1000 H)
};

SlotScan slot_scan(std::span<const cplx> a, std::int64_t X, std::int64_t H, std::int64_t y,
                   double eta, double tau = 0.05);

}  // namespace unilab

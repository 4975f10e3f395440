// Interval / frequency combinatorics: mean-scales-down, prime-ratio graphs,
// walk counts, nearby prime products, mixing counts and T/x model fits.
#pragma once

#include "unilab/uniformity.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace unilab {

// ---- mean scales down ------------------------------------------------------

struct MsdResult {
    double lhs = 0.0;        // sum_{p<=H} p |inner_p - S/p|^2
    double normalized = 0.0; // lhs / H^2
    std::vector<std::uint64_t> exceptional;  // |inner_p - S/p| > delta H / p
    double exceptional_mass = 0.0;           // sum of 1/p over them
    std::size_t primes = 0;
};

// inner_p sums f over the multiples of p in (x, x+H]; S sums f over (x, x+H].
MsdResult msd_check(const FunctionSpec& spec, std::int64_t x, std::int64_t H, double delta);
MsdResult msd_check(std::span<const cplx> values, std::int64_t x, double delta);

// ---- frequencies and the prime-ratio graph ---------------------------------

struct FrequencyAssignment {
    IntervalFamily family;       // only the intervals that carry a frequency
    std::vector<double> alpha;   // in [0, 1), one per interval
    std::vector<double> strength;// |S_I(alpha_I)| / H
    double eta = 0.0;
    double tau = 0.0;
};

// Runs sup_alpha on every interval and keeps those with strength >= eta.
FrequencyAssignment assign_frequencies(const FunctionSpec& spec, const IntervalFamily& family,
                                       double eta, double tau = 0.001);

struct GraphOptions {
    std::uint64_t P1 = 20;       // p1, p2 range over primes in [P1, 2 P1]
    std::uint64_t P2 = 0;        // second scale: primes in [P2/2, P2]; 0 = single scale
    double geom_tol = -1.0;      // < 0: 100 H / (P1 P2), or 100 H / P1 single scale
    double freq_tol = -1.0;      // < 0: 10 P1^2 max(P2, 1) / H
};

// I_i lies within geom_tol of (p2/p1) I_j and ||p2 alpha_i - p1 alpha_j|| <= freq_tol.
struct GraphEdge {
    std::size_t i = 0, j = 0;    // i < j
    std::uint64_t p1 = 0, p2 = 0;
    double gap = 0.0;
    double residual = 0.0;       // mod 1
    std::vector<std::uint64_t> second_primes;  // p'' with mod-p'' residual <= freq_tol
};

struct PrimeRatioGraph {
    std::size_t vertices = 0;
    std::vector<GraphEdge> edges;
    GraphOptions options;        // with defaults resolved
    std::size_t geometric_candidates = 0;  // pairs passing the geometric test
};

PrimeRatioGraph build_graph(const FrequencyAssignment& freqs, const GraphOptions& opt);

std::string graph_csv(const PrimeRatioGraph& g);

// Smallest nonzero |p2/p1 - p4/p3| over pairs of edges sharing a vertex
// (infinity when there is none).
double min_ratio_separation(const PrimeRatioGraph& g);

// Distance from v to the nearest multiple of m.
double dist_to_multiple(double v, double m);

// ---- walks -------------------------------------------------------------------

struct SimpleGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // undirected, no loops

    static SimpleGraph complete(std::size_t n);
    static SimpleGraph path(std::size_t n);
    static SimpleGraph from(const PrimeRatioGraph& g);
};

struct WalkCount {
    mpz_class walks;       // 1^T A^k 1
    mpz_class degree_sum;  // 1^T A 1
    mpq_class margin;      // walks - N (degree_sum / N)^k
    std::size_t n = 0;
    unsigned k = 0;
};

// Requires k <= 16 and n <= 1e4.
WalkCount walk_count(const SimpleGraph& g, unsigned k);

// ---- nearby prime products ---------------------------------------------------

struct ProductCount {
    mpz_class count;            // ordered 2k-tuples
    std::size_t primes = 0;     // primes in [P', 2P']
    std::uint64_t window = 0;   // floor of the window
};

// Ordered 2k-tuples of primes in [P', 2P'] with |prod p2 - prod p1| <= window
// and prod p2 = prod p1 mod q.
ProductCount count_prime_products(unsigned k, std::uint64_t P, double window, std::uint64_t q);

// ---- mixing ------------------------------------------------------------------

struct MixingReport {
    std::uint64_t count = 0;
    double first_term = 0.0;   // #A1 #A2 (H/X) (P'/log P')^2
    double second_term = 0.0;  // (#A1 #A2)^{1/2} (P'/log P')^2
    double fitted_c = 0.0;     // count / (first + second)
};

// Quadruples (I1 in A1, I2 in A2, p1, p2), primes in [P', 2P'] possibly
// equal, with I1 within geom_tol of (p2/p1) I2.
MixingReport mixing_count(const std::vector<Interval>& A1, const std::vector<Interval>& A2,
                          std::uint64_t P, double geom_tol, std::int64_t X);

// ---- frequency model -----------------------------------------------------------

struct FitOptions {
    std::uint32_t q_max = 4;
    double cluster_radius = -1.0;  // < 0: X / H^{1-rho}
    double rho = 0.1;
    double eta = 0.0;              // intervals below this strength are ignored
    double T_max = -1.0;           // < 0: X^2 / H^{2-rho}
    double anchor_offset = 0.5;    // anchor x_I + anchor_offset * H
};

struct ModelFit {
    double T = 0.0;
    double two_pi_T = 0.0;
    std::uint32_t q = 1;
    std::vector<std::int64_t> residues;  // a_I in [0, q)
    std::vector<double> residuals;       // ||alpha_I - T/(2 pi c_I) - a_I/q||
    std::vector<std::size_t> used;       // indices into the assignment
    std::size_t score = 0;               // residuals <= 1/(4H)
    double inlier_fraction = 0.0;
    double ssr = 0.0;
    double grid_spacing = 0.0;
    double T_max = 0.0;
    double cluster_radius = 0.0;
    std::size_t cluster_size = 0;
    double cluster_center = 0.0;
    double anchor_offset = 0.5;
};

// Throws EmptyFitError with fewer than 8 usable intervals.
ModelFit fit_frequency_model(const FrequencyAssignment& freqs, const FitOptions& opt);

}  // namespace unilab

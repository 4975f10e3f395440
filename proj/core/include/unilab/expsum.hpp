// Short exponential sums S_I(alpha) = sum_{x < n <= x+H} f(n) e(-alpha n),
// their certified suprema over alpha, greedy frequency extraction and the
// completion-of-sums search.
#pragma once

#include "unilab/function_spec.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace unilab {

// The half-open interval (x, x+H].
struct Interval {
    std::int64_t x = 0;
    std::int64_t H = 0;

    std::int64_t begin() const noexcept { return x + 1; }
    std::int64_t end() const noexcept { return x + H + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct SupCertificate {
    double alpha_star = 0.0;  // in [0, 1)
    double value = 0.0;       // |S(alpha_star)|, recomputed directly
    double tau = 0.0;         // requested tolerance, as a fraction of H
    double upper_bound = 0.0; // certified: sup_alpha |S| <= upper_bound <= value + tau*H
    double lipschitz = 0.0;   // constant used for the cell bounds
    std::size_t grid_len = 0; // resolution of the finest level reached
    std::size_t refine_steps = 0;
    std::size_t evaluations = 0;
};

struct SupOptions {
    std::size_t max_levels = 40;
    std::size_t max_evaluations = 20'000'000;
    std::size_t max_fft_len = std::size_t{1} << 22;
};

// f(x+1), ..., f(x+H).
std::vector<cplx> interval_values(const FunctionSpec& spec, const Interval& I);

// sum_{m=1}^{H} c[m-1] e(-alpha m), by incremental rotation re-anchored to an
// exactly computed phase every 4096 terms.
cplx coeff_sum(std::span<const cplx> c, double alpha);

// Same, summed over m = offset+1 .. offset+c.size().
cplx coeff_sum(std::span<const cplx> c, double alpha, std::int64_t offset);

cplx short_sum(const FunctionSpec& spec, const Interval& I, double alpha);

// Certified max over alpha of |sum_m c[m-1] e(-alpha m)|. 0 < tau <= 0.1.
SupCertificate sup_alpha_coeffs(std::span<const cplx> c, double tau, const SupOptions& opt = {});

SupCertificate sup_alpha(const FunctionSpec& spec, const Interval& I, double tau,
                         const SupOptions& opt = {});

struct ExtractedFrequency {
    double gamma = 0.0;
    double strength = 0.0;  // max over the dyadic sub-interval family of |S_L(gamma)|
};

// Greedy maximal-frequency extraction on J, where |J| = 10H. Frequencies are
// pairwise more than 1/H apart mod 1 and strengths are non-increasing; the
// scan stops after R picks or once the best remaining strength drops below
// eta*H.
std::vector<ExtractedFrequency> extract_frequencies(std::span<const cplx> c, std::int64_t H,
                                                    double eta, std::size_t R);
std::vector<ExtractedFrequency> extract_frequencies(const FunctionSpec& spec, const Interval& J,
                                                    double eta, std::size_t R);

// Dyadic family used above: J itself and its 2^j aligned pieces, j <= 5,
// each piece at least 8 long. Pairs of (offset, length) into c.
std::vector<std::pair<std::size_t, std::size_t>> dyadic_pieces(std::size_t len);

struct CompletionResult {
    double theta = 0.0;
    double value = 0.0;       // |S_J(alpha + theta)|
    double bound = 0.0;       // eta^4 * |J|
    bool bound_met = false;
    double sub_value = 0.0;   // |S_I(alpha)|
};

// Searches |theta| <= 1/(eta^2 H) for the largest |S_J(alpha + theta)|, H = |J|.
// Requires I inside J, |S_I(alpha)| > eta*H and eta < 0.5.
CompletionResult completion_search(const FunctionSpec& spec, const Interval& I,
                                   const Interval& J, double alpha, double eta);

// Integral over |t| <= T of |sum_n x_n^{it}|^2, in closed form.
double large_sieve_integral(std::span<const double> points, double T);

}  // namespace unilab

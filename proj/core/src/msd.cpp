#include "unilab/error.hpp"
#include "unilab/parallel.hpp"
#include "unilab/proofgraph.hpp"
#include "unilab/sieve.hpp"

#include <cmath>

namespace unilab {

MsdResult msd_check(std::span<const cplx> values, std::int64_t x, double delta) {
    const auto H = static_cast<std::int64_t>(values.size());
    if (x < H || H < 2) throw ParameterError("msd_check requires x >= H >= 2");
    if (!(delta > 0.0)) throw ParameterError("msd_check requires delta > 0");

    cplx S{0.0, 0.0};
    for (const auto& v : values) S += v;

    MsdResult res;
    const auto primes = primes_in(2, static_cast<std::uint64_t>(H)).primes;
    res.primes = primes.size();
    std::vector<double> terms(primes.size());
    std::vector<double> devs(primes.size());
    parallel_for(primes.size(), [&](std::size_t k) {
        const auto p = static_cast<std::int64_t>(primes[k]);
        cplx inner{0.0, 0.0};
        for (std::int64_t n = (x / p + 1) * p; n <= x + H; n += p) inner += values[n - x - 1];
        const cplx dev = inner - S / static_cast<double>(p);
        devs[k] = std::abs(dev);
        terms[k] = static_cast<double>(p) * std::norm(dev);
    });
    const double Hd = static_cast<double>(H);
    for (std::size_t k = 0; k < primes.size(); ++k) {
        res.lhs += terms[k];
        const double p = static_cast<double>(primes[k]);
        if (devs[k] > delta * Hd / p) {
            res.exceptional.push_back(primes[k]);
            res.exceptional_mass += 1.0 / p;
        }
    }
    res.normalized = res.lhs / (Hd * Hd);
    return res;
}

MsdResult msd_check(const FunctionSpec& spec, std::int64_t x, std::int64_t H, double delta) {
    if (x < H) throw ParameterError("msd_check requires x >= H");
    const auto values = interval_values(spec, {x, H});
    return msd_check(values, x, delta);
}

FrequencyAssignment assign_frequencies(const FunctionSpec& spec, const IntervalFamily& family,
                                       double eta, double tau) {
    const std::size_t N = family.intervals.size();
    std::vector<SupCertificate> certs(N);
    parallel_for(N, [&](std::size_t i) { certs[i] = sup_alpha(spec, family.intervals[i], tau); });

    FrequencyAssignment fa;
    fa.family = family;
    fa.family.intervals.clear();
    fa.eta = eta;
    fa.tau = tau;
    const double H = static_cast<double>(family.H);
    for (std::size_t i = 0; i < N; ++i) {
        const double s = certs[i].value / H;
        if (s < eta) continue;
        fa.family.intervals.push_back(family.intervals[i]);
        fa.alpha.push_back(certs[i].alpha_star);
        fa.strength.push_back(s);
    }
    return fa;
}

}  // namespace unilab

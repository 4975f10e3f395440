// 1-bounded arithmetic functions selectable by name, and their evaluation on
// integer ranges.
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace unilab {

using cplx = std::complex<double>;

// e(z) = exp(2 pi i z), with the argument reduced mod 1 first.
cplx unit_phase(double z);

// frac(alpha * n) in [0, 1), exact up to one rounding of the final sum.
double frac_product(double alpha, std::int64_t n);

struct FunctionSpec {
    enum class Kind {
        liouville,
        moebius,
        one,
        zero,           // f(n) = 0 for every n
        archimedean,    // n^{it}
        char_twist,     // chi(n) n^{it}, chi = character(q, index)
        custom_primes,  // completely multiplicative, f(p) from table or default
        random_pm1,     // completely multiplicative, f(p) = +-1 from a seeded hash
        additive,       // e(beta n); not multiplicative, used for calibration
        product,        // pointwise product of factors, optionally conjugated
    };

    Kind kind = Kind::liouville;
    double t = 0.0;
    double beta = 0.0;
    std::uint32_t q = 1;
    std::uint32_t index = 0;
    std::uint64_t seed = 0;
    std::map<std::uint64_t, cplx> prime_values;
    cplx default_prime_value{0.0, 0.0};
    std::vector<FunctionSpec> factors;
    std::vector<bool> conjugate;
    // Global unimodular multiplier applied to every value.
    cplx unit{1.0, 0.0};

    static FunctionSpec liouville();
    static FunctionSpec moebius();
    static FunctionSpec one();
    static FunctionSpec zero();
    static FunctionSpec archimedean(double t);
    static FunctionSpec char_twist(std::uint32_t q, std::uint32_t index, double t);
    static FunctionSpec custom_primes(std::map<std::uint64_t, cplx> values, cplx fallback);
    static FunctionSpec random_pm1(std::uint64_t seed);
    static FunctionSpec additive(double beta);
    // f * conj(g) when conj_second, else f * g.
    static FunctionSpec product(FunctionSpec f, FunctionSpec g, bool conj_second);

    FunctionSpec scaled(cplx u) const;

    // Value at a prime p. For completely multiplicative kinds this determines
    // the function; for moebius it is -1.
    cplx at_prime(std::uint64_t p) const;

    // Short descriptor, e.g. "liouville", "archimedean(5)", "char(3,1,0)".
    std::string name() const;

    void validate() const;
};

// Parses the descriptors produced by FunctionSpec::name() for the named
// kinds: liouville, moebius, one, zero, archimedean(t), char(q,i,t),
// random(seed), additive(beta). Throws ParameterError otherwise.
FunctionSpec parse_function_spec(const std::string& text);

// f(n) for n in [a, b), 1 <= a < b. Ranges are sieved on demand in chunks.
std::vector<cplx> evaluate(const FunctionSpec& spec, std::uint64_t a, std::uint64_t b);

// Single value, f(n) for n >= 1.
cplx value_at(const FunctionSpec& spec, std::uint64_t n);

}  // namespace unilab

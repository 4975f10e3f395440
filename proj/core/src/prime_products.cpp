#include "unilab/error.hpp"
#include "unilab/proofgraph.hpp"
#include "unilab/sieve.hpp"

#include <algorithm>
#include <cmath>

namespace unilab {

namespace {

template <class Int>
std::vector<Int> all_products(const std::vector<std::uint64_t>& primes, unsigned k) {
    std::vector<Int> cur{Int{1}};
    for (unsigned step = 0; step < k; ++step) {
        std::vector<Int> next;
        next.reserve(cur.size() * primes.size());
        for (const Int& c : cur)
            for (auto p : primes) next.push_back(c * static_cast<Int>(p));
        cur.swap(next);
    }
    return cur;
}

template <class Int>
std::uint64_t count_close(std::vector<Int> products, Int window, std::uint64_t q) {
    // Group by residue, then count ordered pairs within the window.
    std::sort(products.begin(), products.end(), [q](const Int& a, const Int& b) {
        const auto ra = static_cast<std::uint64_t>(a % static_cast<Int>(q));
        const auto rb = static_cast<std::uint64_t>(b % static_cast<Int>(q));
        return ra != rb ? ra < rb : a < b;
    });
    std::uint64_t total = 0;
    std::size_t g0 = 0;
    while (g0 < products.size()) {
        const auto r = static_cast<std::uint64_t>(products[g0] % static_cast<Int>(q));
        std::size_t g1 = g0;
        while (g1 < products.size() && static_cast<std::uint64_t>(products[g1] % static_cast<Int>(q)) == r) ++g1;
        std::size_t lo = g0, hi = g0;
        for (std::size_t a = g0; a < g1; ++a) {
            while (products[lo] + window < products[a]) ++lo;
            if (hi < a) hi = a;
            while (hi < g1 && products[hi] <= products[a] + window) ++hi;
            total += hi - lo;
        }
        g0 = g1;
    }
    return total;
}

}  // namespace

ProductCount count_prime_products(unsigned k, std::uint64_t P, double window, std::uint64_t q) {
    if (k < 1) throw ParameterError("count_prime_products requires k >= 1");
    if (P < 2) throw ParameterError("count_prime_products requires P' >= 2");
    if (q < 1) throw ParameterError("count_prime_products requires q >= 1");
    if (!(window >= 0.0)) throw ParameterError("count_prime_products requires window >= 0");
    const auto primes = primes_in(P, 2 * P).primes;
    ProductCount res;
    res.primes = primes.size();
    const double volume = std::pow(static_cast<double>(primes.size()), static_cast<double>(k));
    if (volume > 1e8) throw ParameterError("count_prime_products: pi(2P')^k exceeds 1e8 tuples");
    const double bits = static_cast<double>(k) * std::log2(2.0 * static_cast<double>(P));
    if (bits > 126.0) throw ParameterError("count_prime_products: products exceed 126 bits");
    const double wfloor = std::floor(window);
    if (wfloor > 9e18) throw ParameterError("count_prime_products: window too large");
    res.window = static_cast<std::uint64_t>(wfloor);

    std::uint64_t total = 0;
    if (bits <= 62.0) {
        total = count_close(all_products<std::uint64_t>(primes, k), res.window, q);
    } else {
        __extension__ typedef unsigned __int128 i128;
        total = count_close(all_products<i128>(primes, k), static_cast<i128>(res.window), q);
    }
    res.count = mpz_class(std::to_string(total));
    return res;
}

}  // namespace unilab

#include "unilab/error.hpp"
#include "unilab/proofgraph.hpp"

namespace unilab {

SimpleGraph SimpleGraph::complete(std::size_t n) {
    SimpleGraph g;
    g.n = n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

SimpleGraph SimpleGraph::path(std::size_t n) {
    SimpleGraph g;
    g.n = n;
    for (std::size_t i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

SimpleGraph SimpleGraph::from(const PrimeRatioGraph& pg) {
    SimpleGraph g;
    g.n = pg.vertices;
    for (const auto& e : pg.edges) g.edges.emplace_back(e.i, e.j);
    return g;
}

WalkCount walk_count(const SimpleGraph& g, unsigned k) {
    if (k > 16) throw ParameterError("walk_count requires k <= 16");
    if (g.n > 10'000) throw ParameterError("walk_count requires at most 1e4 vertices");
    for (const auto& [a, b] : g.edges)
        if (a >= g.n || b >= g.n || a == b) throw ParameterError("walk_count: bad edge");

    std::vector<mpz_class> v(g.n, 1), next(g.n);
    for (unsigned step = 0; step < k; ++step) {
        for (auto& x : next) x = 0;
        for (const auto& [a, b] : g.edges) {
            next[a] += v[b];
            next[b] += v[a];
        }
        v.swap(next);
    }

    WalkCount res;
    res.n = g.n;
    res.k = k;
    for (const auto& x : v) res.walks += x;
    res.degree_sum = 2 * static_cast<unsigned long>(g.edges.size());
    if (g.n == 0) {
        res.margin = 0;
        return res;
    }
    // walks - N (S1/N)^k = (walks N^{k-1} - S1^k) / N^{k-1}
    mpz_class nk1, s1k;
    mpz_pow_ui(nk1.get_mpz_t(), mpz_class(static_cast<unsigned long>(g.n)).get_mpz_t(), k == 0 ? 0 : k - 1);
    mpz_pow_ui(s1k.get_mpz_t(), res.degree_sum.get_mpz_t(), k);
    if (k == 0) {
        // 1^T 1 - N = 0
        res.margin = mpq_class(res.walks - static_cast<unsigned long>(g.n));
    } else {
        res.margin = mpq_class(res.walks * nk1 - s1k, nk1);
        res.margin.canonicalize();
    }
    return res;
}

}  // namespace unilab

#include <doctest.h>

#include "unilab/error.hpp"
#include "unilab/parallel.hpp"

#include <atomic>
#include <numeric>
#include <vector>

using namespace unilab;

TEST_SUITE("parallel") {

TEST_CASE("every index runs exactly once") {
    for (unsigned t : {1u, 3u, 8u}) {
        ScopedThreadCount tc(t);
        std::vector<int> hit(1000, 0);
        parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
        CHECK(std::accumulate(hit.begin(), hit.end(), 0) == 1000);
        CHECK(*std::min_element(hit.begin(), hit.end()) == 1);
    }
}

TEST_CASE("exceptions propagate to the caller") {
    ScopedThreadCount tc(4);
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                        if (i == 57) throw ParameterError("boom");
                    }),
                    ParameterError);
}

TEST_CASE("nested calls complete") {
    ScopedThreadCount tc(4);
    std::vector<long> out(16, 0);
    parallel_for(out.size(), [&](std::size_t i) {
        std::vector<long> inner(50);
        parallel_for(inner.size(), [&](std::size_t k) { inner[k] = static_cast<long>(i * k); });
        out[i] = std::accumulate(inner.begin(), inner.end(), 0L);
    });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<long>(i) * 1225);
}

TEST_CASE("scoped thread count restores") {
    set_thread_count(2);
    {
        ScopedThreadCount tc(7);
        CHECK(thread_count() == 7);
    }
    CHECK(thread_count() == 2);
    set_thread_count(1);
}

}

// Deterministic fork-join helpers.
//
// Work items are indices. Each index writes its own output slot and callers
// reduce in index order, so results are bit-identical for any thread count.
// Callers that chunk work must derive chunk boundaries from the problem size
// alone.
#pragma once

#include <cstddef>
#include <functional>

namespace unilab {

// Global worker count used by parallel_for. Defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

// RAII override of the worker count.
class ScopedThreadCount {
public:
    explicit ScopedThreadCount(unsigned n) : saved_(thread_count()) { set_thread_count(n); }
    ~ScopedThreadCount() { set_thread_count(saved_); }
    ScopedThreadCount(const ScopedThreadCount&) = delete;
    ScopedThreadCount& operator=(const ScopedThreadCount&) = delete;

private:
    unsigned saved_;
};

// Calls body(i) for every i in [0, n). The first exception thrown by any
// body is rethrown on the calling thread after all workers finish. A call
// made from inside a body runs serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace unilab

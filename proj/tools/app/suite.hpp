// The acceptance battery: thirteen numbered checks, each producing a JSON
// payload and a verdict.
#pragma once

#include "report.hpp"

#include <string>
#include <vector>

namespace unilab::app {

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = false;
    json payload;         // deterministic part, compared across thread counts
    std::string detail;   // human-readable, may mention timings
    double seconds = 0.0;
};

std::vector<int> criterion_ids();
std::string criterion_title(int id);

// Runs one of criteria 1..12 at the current thread count.
Criterion run_criterion(int id);

// Runs the requested ids at `threads`. Criterion 13 reruns every other
// requested criterion (all of 1..12 when none are given) at `alt_threads`
// and compares payloads byte for byte.
std::vector<Criterion> run_suite(const std::vector<int>& ids, unsigned threads,
                                 unsigned alt_threads = 8);

}  // namespace unilab::app

// Pretentious distance D(f; X; Q): the infimum over characters chi mod
// q <= Q and |t| <= t_max of sqrt(sum_{p<=X} (1 - Re f(p) p^{it} chi(p)) / p).
#pragma once

#include "unilab/function_spec.hpp"

#include <cstdint>
#include <string>

namespace unilab {

struct DistanceResult {
    double D = 0.0;
    double D2 = 0.0;
    double argmin_t = 0.0;
    std::uint32_t argmin_q = 1;
    std::uint32_t argmin_index = 0;
    double t_max = 0.0;
    double grid_spacing = 0.0;
    double tol = 0.0;           // certified: true min of D^2 >= D2 - tol
    double lipschitz = 0.0;     // sum_{p<=X} log p / p
    double max_d2 = 0.0;        // sum_{p<=X} 2/p
    std::uint64_t X = 0;
    std::uint32_t Q = 0;
    std::size_t evaluations = 0;
};

// Pretentious objective for one character at one t.
double pretentious_objective(const FunctionSpec& spec, std::uint64_t X, std::uint32_t q,
                             std::uint32_t index, double t);

// Requires Q <= 100, X <= 1e8, t_max >= 0, tol > 0. tol bounds the gap in D^2.
DistanceResult pretentious_distance(const FunctionSpec& spec, std::uint64_t X, std::uint32_t Q,
                                    double t_max, double tol);

std::string distance_csv_header();
std::string distance_csv_row(const FunctionSpec& spec, const DistanceResult& r);

}  // namespace unilab

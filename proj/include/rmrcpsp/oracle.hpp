#pragma once

#include <utility>
#include <vector>

#include "rmrcpsp/instance.hpp"
#include "rmrcpsp/network.hpp"

namespace rmrcpsp {

struct OracleResult {
    Time makespan = 0;
    ModeVector modes;
    std::vector<std::pair<int, int>> selection; // added edges, base closure excluded
};

/// Exhaustive ground truth for tiny instances: enumerates non-renewable
/// feasible mode vectors and, per vector, sufficient selections by branching
/// on minimal forbidden sets; each candidate is scored with the exact
/// worst-case dynamic program. Guard rails: n <= 6 and at most 64 mode
/// combinations.
OracleResult brute_force_solve(const Instance& inst, BudgetGamma gamma);

/// Same enumeration parallelized over mode vectors (OpenMP when available).
/// Result is identical to the serial reference by construction.
OracleResult brute_force_solve_parallel(const Instance& inst, BudgetGamma gamma);

} // namespace rmrcpsp

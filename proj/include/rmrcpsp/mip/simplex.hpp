#pragma once

#include <utility>
#include <vector>

namespace rmrcpsp::mip {

/// LP in computational form: min cost . x, row_lo <= A x <= row_hi,
/// lower <= x <= upper. Infinities are +-kLpInfinity.
constexpr double kLpInfinity = 1e30;

struct LpRow {
    std::vector<std::pair<int, double>> terms;
    double lo = -kLpInfinity;
    double hi = kLpInfinity;
};

struct LpProblem {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LpRow> rows;

    int num_vars() const { return static_cast<int>(cost.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
    LpStatus status = LpStatus::IterLimit;
    double objective = 0.0;
    std::vector<double> x;
};

/// Bounded-variable primal simplex (dense tableau, two-phase). Dantzig
/// pricing with a Bland fallback against stalling.
LpResult solve_lp(const LpProblem& problem, int iteration_limit = 0);

} // namespace rmrcpsp::mip
